#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/render/image.hpp"
#include "poseaug/render/scene.hpp"

namespace poseaug {

struct PoseDelta
{
    double yaw = 0.0;   ///< degrees
    double pitch = 0.0; ///< degrees
};

struct RenderedFrame
{
    Image image;
    /// The 68 model landmarks projected with the rotated parameters.
    Points2D landmarks;
    /// Fit parameters describing the face in the rendered image.
    FitParams params;
};

/**
 * Re-renders a frame with its fitted face turned by delta about the face centroid.
 *
 * Background anchors, scene triangulation, rotation and rasterisation run in sequence; the
 * output has the input's dimensions. Component errors propagate.
 */
RenderedFrame render_new_pose(const Image& image, const MorphableModel& model, const FitParams& fit,
                              const PoseDelta& delta, int grid_step = kDefaultGridStep);

/// Parameters after rotating the camera-space face by delta about pivot (z toward the camera).
FitParams rotate_params(const FitParams& fit, const PoseDelta& delta, const Eigen::Vector3d& pivot);

} // namespace poseaug
