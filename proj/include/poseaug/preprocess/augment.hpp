#pragma once

#include "poseaug/render/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace poseaug {

/**
 * Video-level 2D augmentation settings.
 *
 * Text form: one "key = value" per line, '#' starts a comment. Keys are the field names below;
 * booleans accept true/false/1/0, ranges are given as two keys (scale_min, scale_max, ...).
 */
struct Aug2DConfig
{
    bool enable_scale = true;
    bool enable_degrade = true;
    bool enable_patches = true;
    bool enable_crop = true;
    bool enable_flip = true;
    double scale_min = 0.8;
    double scale_max = 1.2;
    double degrade_min = 0.4;
    double degrade_max = 0.8;
    double patch_frac_min = 0.1;
    double patch_frac_max = 0.4;
    int patch_count_min = 1;
    int patch_count_max = 3;
    int roi_size = 96;
    int crop_size = 88;
    double flip_prob = 0.5;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Throws FormatError on unknown keys or unparsable values; starts from `base`.
Aug2DConfig parse_aug2d_config(const std::string& text, Aug2DConfig base = {});
Aug2DConfig load_aug2d_config(const std::filesystem::path& path, Aug2DConfig base = {});

struct NoisePatch
{
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    double frac_width = 0.0;
    double frac_height = 0.0;
    /// width * height RGB triples, row-major.
    std::vector<std::uint8_t> rgb;

    friend bool operator==(const NoisePatch&, const NoisePatch&) = default;
};

/// One draw of every augmentation for a whole video.
struct AugPlan
{
    int roi_size = 96;
    int crop_size = 88;
    bool flip = false;
    int crop_x = 4;
    int crop_y = 4;
    double scale = 1.0;
    double degrade = 1.0;
    std::vector<NoisePatch> patches;

    friend bool operator==(const AugPlan&, const AugPlan&) = default;
};

/**
 * Draws flip, crop offset (0..roi-crop inclusive per axis), scale, degrade factor, patch count
 * and each patch in that fixed order, always consuming the same draws; disabled augmentations are
 * then reset to their neutral value (no flip, centre crop, factor 1, no patches).
 */
AugPlan make_video_plan(const Aug2DConfig& config, std::uint64_t video_seed);

/**
 * scale (about the centre, replicated border) -> degrade (bilinear down to round(f * roi) and
 * back) -> noise patches -> crop -> flip. Throws SizeError unless the frame is roi x roi.
 */
Image apply_plan(const Image& frame, const AugPlan& plan);

} // namespace poseaug
