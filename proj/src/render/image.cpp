#include "poseaug/render/image.hpp"
#include "poseaug/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace poseaug {

Image::Image(int w, int h) : width(w), height(h)
{
    if (w < 0 || h < 0)
    {
        throw std::invalid_argument("Image: negative dimensions");
    }
    data.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, 0);
}

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in)
{
    std::string token;
    char c = 0;
    while (in.get(c))
    {
        if (c == '#')
        {
            std::string ignored;
            std::getline(in, ignored);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)))
        {
            if (!token.empty())
            {
                return token;
            }
            continue;
        }
        token.push_back(c);
    }
    return token;
}

int parse_dimension(const std::string& token, const std::filesystem::path& path)
{
    try
    {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size() || v <= 0)
        {
            throw std::invalid_argument(token);
        }
        return v;
    }
    catch (const std::exception&)
    {
        throw FormatError("bad PPM header value '" + token + "' in " + path.string());
    }
}

} // namespace

Image read_ppm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot open image " + path.string());
    }
    if (next_token(in) != "P6")
    {
        throw FormatError("not a binary PPM (P6): " + path.string());
    }
    const int w = parse_dimension(next_token(in), path);
    const int h = parse_dimension(next_token(in), path);
    if (parse_dimension(next_token(in), path) != 255)
    {
        throw FormatError("only 8-bit PPM is supported: " + path.string());
    }
    Image image(w, h);
    in.read(reinterpret_cast<char*>(image.data.data()), static_cast<std::streamsize>(image.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(image.data.size()))
    {
        throw FormatError("truncated PPM payload: " + path.string());
    }
    return image;
}

void write_ppm(const Image& image, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot write image " + path.string());
    }
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.data.data()), static_cast<std::streamsize>(image.data.size()));
    if (!out)
    {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::uint8_t to_u8(double value)
{
    return static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
}

std::array<double, 3> sample_bilinear(const Image& image, double u, double v)
{
    const double x = std::clamp(u - 0.5, 0.0, static_cast<double>(image.width - 1));
    const double y = std::clamp(v - 0.5, 0.0, static_cast<double>(image.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c)
    {
        const double top = (1.0 - fx) * image.at(x0, y0, c) + fx * image.at(x1, y0, c);
        const double bottom = (1.0 - fx) * image.at(x0, y1, c) + fx * image.at(x1, y1, c);
        out[c] = (1.0 - fy) * top + fy * bottom;
    }
    return out;
}

Image resize_bilinear(const Image& image, int out_width, int out_height)
{
    if (image.empty() || out_width <= 0 || out_height <= 0)
    {
        throw SizeError("resize_bilinear: empty input or output size");
    }
    Image out(out_width, out_height);
    const double sx = static_cast<double>(image.width) / out_width;
    const double sy = static_cast<double>(image.height) / out_height;
    for (int y = 0; y < out_height; ++y)
    {
        for (int x = 0; x < out_width; ++x)
        {
            const auto rgb = sample_bilinear(image, (x + 0.5) * sx, (y + 0.5) * sy);
            for (int c = 0; c < 3; ++c)
            {
                out.at(x, y, c) = to_u8(rgb[c]);
            }
        }
    }
    return out;
}

Image crop(const Image& image, int x, int y, int w, int h)
{
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > image.width || y + h > image.height)
    {
        throw SizeError("crop: window outside image");
    }
    Image out(w, h);
    for (int row = 0; row < h; ++row)
    {
        std::copy_n(image.data.begin() + static_cast<std::ptrdiff_t>(image.offset(x, y + row)), 3 * w,
                    out.data.begin() + static_cast<std::ptrdiff_t>(out.offset(0, row)));
    }
    return out;
}

Image flip_horizontal(const Image& image)
{
    Image out(image.width, image.height);
    for (int y = 0; y < image.height; ++y)
    {
        for (int x = 0; x < image.width; ++x)
        {
            for (int c = 0; c < 3; ++c)
            {
                out.at(image.width - 1 - x, y, c) = image.at(x, y, c);
            }
        }
    }
    return out;
}

Image warp_affine(const Image& image, const Eigen::Matrix<double, 2, 3>& dst_to_src, int out_width, int out_height)
{
    if (image.empty() || out_width <= 0 || out_height <= 0)
    {
        throw SizeError("warp_affine: empty input or output size");
    }
    Image out(out_width, out_height);
    for (int y = 0; y < out_height; ++y)
    {
        for (int x = 0; x < out_width; ++x)
        {
            const Eigen::Vector2d src = dst_to_src * Eigen::Vector3d(x + 0.5, y + 0.5, 1.0);
            const auto rgb = sample_bilinear(image, src.x(), src.y());
            for (int c = 0; c < 3; ++c)
            {
                out.at(x, y, c) = to_u8(rgb[c]);
            }
        }
    }
    return out;
}

} // namespace poseaug
