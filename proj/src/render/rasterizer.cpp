#include "poseaug/render/rasterizer.hpp"
#include "poseaug/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace poseaug {

namespace {

constexpr double kEdgeTolerance = 1e-9;

struct Fragment
{
    double depth = -std::numeric_limits<double>::infinity();
    int triangle = -1;
    double u = 0.0;
    double v = 0.0;
};

} // namespace

Image rasterize(const SceneMesh& mesh, const Image& source, int out_width, int out_height)
{
    if (mesh.triangles.empty() || mesh.vertices.cols() == 0)
    {
        throw RenderError("rasterize: empty mesh");
    }
    if (source.empty() || out_width <= 0 || out_height <= 0)
    {
        throw RenderError("rasterize: empty source or output size");
    }
    mesh.validate(source.width, source.height);

    std::vector<Fragment> frags(static_cast<std::size_t>(out_width) * static_cast<std::size_t>(out_height));
    for (int ti = 0; ti < static_cast<int>(mesh.triangles.size()); ++ti)
    {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(ti)];
        const Eigen::Vector2d p0 = mesh.vertices.col(tri[0]).head<2>();
        const Eigen::Vector2d p1 = mesh.vertices.col(tri[1]).head<2>();
        const Eigen::Vector2d p2 = mesh.vertices.col(tri[2]).head<2>();
        const double area = orient2d(p0, p1, p2);
        if (std::abs(area) < 1e-12)
        {
            continue; // edge-on after rotation
        }
        const double min_x = std::min({p0.x(), p1.x(), p2.x()});
        const double max_x = std::max({p0.x(), p1.x(), p2.x()});
        const double min_y = std::min({p0.y(), p1.y(), p2.y()});
        const double max_y = std::max({p0.y(), p1.y(), p2.y()});
        const int x_begin = std::max(0, static_cast<int>(std::ceil(min_x - 0.5 - kEdgeTolerance)));
        const int x_end = std::min(out_width - 1, static_cast<int>(std::floor(max_x - 0.5 + kEdgeTolerance)));
        const int y_begin = std::max(0, static_cast<int>(std::ceil(min_y - 0.5 - kEdgeTolerance)));
        const int y_end = std::min(out_height - 1, static_cast<int>(std::floor(max_y - 0.5 + kEdgeTolerance)));

        const double z0 = mesh.vertices(2, tri[0]);
        const double z1 = mesh.vertices(2, tri[1]);
        const double z2 = mesh.vertices(2, tri[2]);
        for (int y = y_begin; y <= y_end; ++y)
        {
            for (int x = x_begin; x <= x_end; ++x)
            {
                const Eigen::Vector2d c(x + 0.5, y + 0.5);
                const double w0 = orient2d(p1, p2, c) / area;
                const double w1 = orient2d(p2, p0, c) / area;
                const double w2 = orient2d(p0, p1, c) / area;
                if (w0 < -kEdgeTolerance || w1 < -kEdgeTolerance || w2 < -kEdgeTolerance)
                {
                    continue;
                }
                const double z = w0 * z0 + w1 * z1 + w2 * z2;
                Fragment& f = frags[static_cast<std::size_t>(y) * out_width + x];
                if (z > f.depth || (z == f.depth && ti < f.triangle))
                {
                    f.depth = z;
                    f.triangle = ti;
                    f.u = w0 * mesh.uv(0, tri[0]) + w1 * mesh.uv(0, tri[1]) + w2 * mesh.uv(0, tri[2]);
                    f.v = w0 * mesh.uv(1, tri[0]) + w1 * mesh.uv(1, tri[1]) + w2 * mesh.uv(1, tri[2]);
                }
            }
        }
    }

    Image out(out_width, out_height);
    std::vector<char> row_covered(static_cast<std::size_t>(out_height), 0);
    for (int y = 0; y < out_height; ++y)
    {
        int last_covered = -1;
        for (int x = 0; x < out_width; ++x)
        {
            const Fragment& f = frags[static_cast<std::size_t>(y) * out_width + x];
            if (f.triangle < 0)
            {
                continue;
            }
            const auto rgb = sample_bilinear(source, f.u, f.v);
            for (int c = 0; c < 3; ++c)
            {
                out.at(x, y, c) = to_u8(rgb[c]);
            }
            last_covered = x;
            row_covered[static_cast<std::size_t>(y)] = 1;
        }
        if (last_covered < 0)
        {
            continue;
        }
        // Edge-replication fill along the row.
        int prev = -1;
        for (int x = 0; x < out_width; ++x)
        {
            if (frags[static_cast<std::size_t>(y) * out_width + x].triangle >= 0)
            {
                prev = x;
                continue;
            }
            int next = x + 1;
            while (next < out_width && frags[static_cast<std::size_t>(y) * out_width + next].triangle < 0)
            {
                ++next;
            }
            for (int fill = x; fill < next; ++fill)
            {
                int src = -1;
                if (prev < 0)
                {
                    src = next;
                }
                else if (next >= out_width)
                {
                    src = prev;
                }
                else
                {
                    src = (fill - prev <= next - fill) ? prev : next;
                }
                std::copy_n(out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(src, y)), 3,
                            out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(fill, y)));
            }
            x = next - 1;
        }
    }

    if (std::none_of(row_covered.begin(), row_covered.end(), [](char c) { return c != 0; }))
    {
        throw RenderError("rasterize: mesh covers no output pixel");
    }
    for (int y = 0; y < out_height; ++y)
    {
        if (row_covered[static_cast<std::size_t>(y)])
        {
            continue;
        }
        int best = -1;
        for (int d = 1; best < 0; ++d)
        {
            if (y - d >= 0 && row_covered[static_cast<std::size_t>(y - d)])
            {
                best = y - d;
            }
            else if (y + d < out_height && row_covered[static_cast<std::size_t>(y + d)])
            {
                best = y + d;
            }
        }
        std::copy_n(out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(0, best)), 3 * out_width,
                    out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(0, y)));
    }
    return out;
}

} // namespace poseaug
