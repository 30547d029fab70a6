#pragma once

#include "Eigen/Core"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace poseaug {

/// 3xN matrix of model-space or camera-space vertex coordinates.
using Shape3D = Eigen::Matrix3Xd;
/// 2xN matrix of image coordinates in pixels.
using Points2D = Eigen::Matrix2Xd;

inline constexpr int kNumLandmarks = 68;

/**
 * Linear face model: a mean shape plus identity and expression displacement bases.
 *
 * Shapes are stored flattened as (x0, y0, z0, x1, y1, z1, ...), so a basis has 3N rows.
 * The payload is kept in single precision, which makes the on-disk container an exact
 * image of the in-memory model. All arithmetic on it is done in double.
 */
struct MorphableModel
{
    Eigen::VectorXf mean_shape;
    Eigen::MatrixXf id_basis;
    Eigen::MatrixXf exp_basis;
    std::vector<std::uint32_t> landmark_indices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    /// Per-column prior standard deviations. Absent means all ones.
    std::optional<Eigen::VectorXf> id_scales;
    std::optional<Eigen::VectorXf> exp_scales;

    int num_vertices() const { return static_cast<int>(mean_shape.size() / 3); }
    int num_id() const { return static_cast<int>(id_basis.cols()); }
    int num_exp() const { return static_cast<int>(exp_basis.cols()); }

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;
};

/// Weak-perspective fit parameters for one frame: scale, rotation, 2D translation and shape coefficients.
struct FitParams
{
    double scale = 1.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();
    Eigen::VectorXd id_coeffs;
    Eigen::VectorXd exp_coeffs;
};

/// Head pose in degrees. R = R_y(yaw) * R_x(pitch) * R_z(roll) in an x-right, y-down, z-toward-camera frame.
struct PoseAngles
{
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
};

/// mean + U_id * id_coeffs + U_exp * exp_coeffs, as a 3xN matrix.
Shape3D reconstruct_shape(const MorphableModel& model, const Eigen::VectorXd& id_coeffs,
                          const Eigen::VectorXd& exp_coeffs);

/// Same as reconstruct_shape but restricted to the model's landmark vertices (3x68).
Shape3D reconstruct_landmarks(const MorphableModel& model, const Eigen::VectorXd& id_coeffs,
                              const Eigen::VectorXd& exp_coeffs);

/// Weak-perspective projection: scale * C * R * shape + t, with C dropping the z row.
Points2D project(const Shape3D& shape, const FitParams& params);

/// Lifts a shape into camera space: scale * R * shape + (t, 0). Its x/y rows equal project().
Shape3D to_camera_space(const Shape3D& shape, const FitParams& params);

Eigen::Matrix3d rotation_from_euler(const PoseAngles& angles);

/// Inverse of rotation_from_euler. Throws DegeneratePoseError for |pitch| >= 89.9 degrees.
PoseAngles euler_from_rotation(const Eigen::Matrix3d& rotation);

/// True when R^T R = I and det R = +1 within tol.
bool is_rotation(const Eigen::Matrix3d& rotation, double tol = 1e-6);

/// Flatten a 3xN shape back to (x0, y0, z0, ...).
Eigen::VectorXd flatten(const Shape3D& shape);

} // namespace poseaug
