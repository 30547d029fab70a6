#include "warp_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace poseaug::testing {

namespace {

double texel(const Image& img, int x, int y, int c)
{
    x = std::clamp(x, 0, img.width - 1);
    y = std::clamp(y, 0, img.height - 1);
    return img.data[(static_cast<std::size_t>(y) * img.width + x) * 3 + c];
}

std::array<double, 3> bilinear(const Image& img, double u, double v)
{
    const double fx = u - 0.5;
    const double fy = v - 0.5;
    const int ix = static_cast<int>(std::floor(fx));
    const int iy = static_cast<int>(std::floor(fy));
    const double ax = fx - ix;
    const double ay = fy - iy;
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c)
    {
        const double top = (1 - ax) * texel(img, ix, iy, c) + ax * texel(img, ix + 1, iy, c);
        const double bottom = (1 - ax) * texel(img, ix, iy + 1, c) + ax * texel(img, ix + 1, iy + 1, c);
        out[c] = (1 - ay) * top + ay * bottom;
    }
    return out;
}

} // namespace

OracleImage inverse_warp_oracle(const Image& source, const PlanarQuad& quad, const Eigen::Matrix3d& rotation,
                                const Eigen::Vector3d& pivot)
{
    OracleImage out;
    out.width = source.width;
    out.height = source.height;
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
    // Output point q = R (s - pivot) + pivot with s = (a, b, quad.z); the first two rows of q are
    // the pixel centre, which is linear in (a, b).
    Eigen::Matrix2d m;
    m << rotation(0, 0), rotation(0, 1), rotation(1, 0), rotation(1, 1);
    const Eigen::Matrix2d m_inv = m.inverse();
    for (int y = 0; y < out.height; ++y)
    {
        for (int x = 0; x < out.width; ++x)
        {
            const double dz = quad.z - pivot.z();
            const Eigen::Vector2d rhs(x + 0.5 - pivot.x() - rotation(0, 2) * dz,
                                      y + 0.5 - pivot.y() - rotation(1, 2) * dz);
            const Eigen::Vector2d d = m_inv * rhs;
            const double sx = d.x() + pivot.x();
            const double sy = d.y() + pivot.y();
            if (sx < quad.x0 || sx > quad.x1 || sy < quad.y0 || sy > quad.y1)
            {
                continue;
            }
            out.pixels[static_cast<std::size_t>(y) * out.width + x] = bilinear(source, sx, sy);
        }
    }
    return out;
}

double mean_abs_difference(const Image& rendered, const OracleImage& oracle, int* covered)
{
    double total = 0.0;
    int count = 0;
    for (int y = 0; y < oracle.height; ++y)
    {
        for (int x = 0; x < oracle.width; ++x)
        {
            const auto& px = oracle.pixels[static_cast<std::size_t>(y) * oracle.width + x];
            if (!px)
            {
                continue;
            }
            for (int c = 0; c < 3; ++c)
            {
                total += std::abs(rendered.at(x, y, c) - (*px)[c]);
            }
            ++count;
        }
    }
    if (covered != nullptr)
    {
        *covered = count;
    }
    return count == 0 ? 0.0 : total / (3.0 * count);
}

} // namespace poseaug::testing
