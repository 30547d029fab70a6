#pragma once

#include "poseaug/core/morphable_model.hpp"

#include <filesystem>

namespace poseaug {

/*
 * Model container, all integers and floats little-endian:
 *
 *   char[7]  magic "PW3DMM\0"
 *   u32      version (1)
 *   u32      N (vertices), K_id, K_exp
 *   u32      landmark count, triangle count
 *   u32      flags (bit 0: id scales present, bit 1: exp scales present)
 *   f32      mean[3N]
 *   f32      id_basis[3N * K_id]    column-major
 *   f32      exp_basis[3N * K_exp]  column-major
 *   u32      landmark_indices[landmark count]
 *   u32      triangles[3 * triangle count]
 *   f32      id_scales[K_id]        if flag bit 0
 *   f32      exp_scales[K_exp]      if flag bit 1
 */
inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Throws FormatError naming the offending field on any malformed input.
MorphableModel load_model(const std::filesystem::path& path);

/// Throws std::invalid_argument if the model violates its invariants (including zero vertices).
void save_model(const MorphableModel& model, const std::filesystem::path& path);

} // namespace poseaug
