#pragma once

#include "Eigen/Core"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace poseaug {

/// 8-bit RGB raster, row-major, interleaved channels.
struct Image
{
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h);

    static constexpr int channels = 3;

    bool empty() const { return width == 0 || height == 0; }
    std::size_t offset(int x, int y) const
    {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
    }
    std::uint8_t& at(int x, int y, int c) { return data[offset(x, y) + static_cast<std::size_t>(c)]; }
    std::uint8_t at(int x, int y, int c) const { return data[offset(x, y) + static_cast<std::size_t>(c)]; }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Binary PPM (P6, maxval 255).
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const Image& image, const std::filesystem::path& path);

/**
 * Bilinear sample with pixel centres at (x + 0.5, y + 0.5); coordinates outside the image are
 * clamped to the border. Returns unrounded channel values.
 */
std::array<double, 3> sample_bilinear(const Image& image, double u, double v);

/// Round-half-up and clamp to [0, 255].
std::uint8_t to_u8(double value);

/// Bilinear resize with aligned pixel centres (sample point (x + 0.5) * in / out).
Image resize_bilinear(const Image& image, int out_width, int out_height);

/// Copy of the w x h window starting at (x, y); the window must lie inside the image.
Image crop(const Image& image, int x, int y, int w, int h);

Image flip_horizontal(const Image& image);

/**
 * Resamples through an inverse map: output pixel centre q samples the source at
 * dst_to_src * (q, 1). Border pixels are replicated.
 */
Image warp_affine(const Image& image, const Eigen::Matrix<double, 2, 3>& dst_to_src, int out_width,
                  int out_height);

} // namespace poseaug
