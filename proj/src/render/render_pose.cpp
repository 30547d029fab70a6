#include "poseaug/render/render_pose.hpp"
#include "poseaug/render/rasterizer.hpp"

namespace poseaug {

FitParams rotate_params(const FitParams& fit, const PoseDelta& delta, const Eigen::Vector3d& pivot)
{
    const Eigen::Matrix3d dr = rotation_from_euler({delta.yaw, delta.pitch, 0.0});
    FitParams out = fit;
    out.rotation = dr * fit.rotation;
    const Eigen::Vector3d t3(fit.translation.x(), fit.translation.y(), 0.0);
    out.translation = (dr * (t3 - pivot) + pivot).head<2>();
    return out;
}

RenderedFrame render_new_pose(const Image& image, const MorphableModel& model, const FitParams& fit,
                              const PoseDelta& delta, int grid_step)
{
    const Shape3D face = to_camera_space(reconstruct_shape(model, fit.id_coeffs, fit.exp_coeffs), fit);
    const auto anchors = estimate_background_depth(face, image, grid_step);
    const SceneMesh mesh = build_scene_mesh(face, image, anchors);
    const Eigen::Vector3d pivot = face_centroid(mesh);
    const SceneMesh rotated = rotate_scene(mesh, delta.yaw, delta.pitch, pivot);

    RenderedFrame out;
    out.image = rasterize(rotated, image, image.width, image.height);
    out.params = rotate_params(fit, delta, pivot);
    out.landmarks = project(reconstruct_landmarks(model, fit.id_coeffs, fit.exp_coeffs), out.params);
    return out;
}

} // namespace poseaug
