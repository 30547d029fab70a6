#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/core/random.hpp"

#include <cstdint>

namespace poseaug::testing {

/// Standard normal draw via Box-Muller on the portable canonical stream.
double normal(Rng& rng);

/**
 * Face-like synthetic model: a grid of vertices on a frontal dome (x right, y down, z toward
 * the camera), grid triangles, 68 landmark vertices spread over the grid and Gaussian bases.
 * The vertex count is rounded to the nearest full grid (cols x rows with cols ~ rows).
 */
MorphableModel make_synthetic_model(int n_vertices, int k_id, int k_exp, std::uint64_t seed,
                                    bool with_scales = false);

struct ParamRanges
{
    double max_yaw = 60.0;
    double max_pitch = 30.0;
    double max_roll = 20.0;
    double min_scale = 0.8;
    double max_scale = 2.0;
    double min_translation = 100.0;
    double max_translation = 300.0;
    double coeff_sigma = 1.0;
};

FitParams random_params(const MorphableModel& model, Rng& rng, const ParamRanges& ranges = {});

/// Noise-free 68-point landmarks of the model under params.
Points2D synth_landmarks(const MorphableModel& model, const FitParams& params);

Eigen::Matrix3d random_rotation(Rng& rng);

} // namespace poseaug::testing

#include "poseaug/render/image.hpp"

namespace poseaug::testing {

/// Smooth random colour field plus mild per-pixel noise.
Image make_texture(int width, int height, Rng& rng);

/// Synthetic frame: a textured background with a model face placed near the centre.
struct FaceScene
{
    Image image;
    FitParams params;
};

FaceScene make_face_scene(const MorphableModel& model, Rng& rng, int size = 256);

} // namespace poseaug::testing
