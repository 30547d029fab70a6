#include "poseaug/core/morphable_model.hpp"
#include "poseaug/core/errors.hpp"

#include "Eigen/Dense"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace poseaug {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kGimbalLimitDeg = 89.9;

} // namespace

void MorphableModel::validate() const
{
    if (mean_shape.size() == 0 || mean_shape.size() % 3 != 0)
    {
        throw std::invalid_argument("mean_shape: length must be a positive multiple of 3");
    }
    const auto rows = mean_shape.size();
    if (id_basis.rows() != rows)
    {
        throw std::invalid_argument("id_basis: expected " + std::to_string(rows) + " rows");
    }
    if (exp_basis.rows() != rows)
    {
        throw std::invalid_argument("exp_basis: expected " + std::to_string(rows) + " rows");
    }
    const auto n = static_cast<std::uint32_t>(num_vertices());
    if (landmark_indices.size() != kNumLandmarks)
    {
        throw std::invalid_argument("landmark_indices: expected 68 entries");
    }
    for (auto idx : landmark_indices)
    {
        if (idx >= n)
        {
            throw std::invalid_argument("landmark_indices: index " + std::to_string(idx) +
                                        " out of range");
        }
    }
    for (const auto& tri : triangles)
    {
        for (auto idx : tri)
        {
            if (idx >= n)
            {
                throw std::invalid_argument("triangles: index " + std::to_string(idx) +
                                            " out of range");
            }
        }
    }
    if (id_scales && id_scales->size() != id_basis.cols())
    {
        throw std::invalid_argument("id_scales: length must equal K_id");
    }
    if (exp_scales && exp_scales->size() != exp_basis.cols())
    {
        throw std::invalid_argument("exp_scales: length must equal K_exp");
    }
    if ((id_scales && (id_scales->array() <= 0.0f).any()) ||
        (exp_scales && (exp_scales->array() <= 0.0f).any()))
    {
        throw std::invalid_argument("basis scales must be positive");
    }
}

Shape3D reconstruct_shape(const MorphableModel& model, const Eigen::VectorXd& id_coeffs,
                          const Eigen::VectorXd& exp_coeffs)
{
    if (id_coeffs.size() != model.num_id())
    {
        throw std::invalid_argument("reconstruct_shape: id_coeffs length " +
                                    std::to_string(id_coeffs.size()) + " != K_id " +
                                    std::to_string(model.num_id()));
    }
    if (exp_coeffs.size() != model.num_exp())
    {
        throw std::invalid_argument("reconstruct_shape: exp_coeffs length " +
                                    std::to_string(exp_coeffs.size()) + " != K_exp " +
                                    std::to_string(model.num_exp()));
    }
    Eigen::VectorXd flat = model.mean_shape.cast<double>();
    if (model.num_id() > 0)
    {
        flat.noalias() += model.id_basis.cast<double>() * id_coeffs;
    }
    if (model.num_exp() > 0)
    {
        flat.noalias() += model.exp_basis.cast<double>() * exp_coeffs;
    }
    return Eigen::Map<const Shape3D>(flat.data(), 3, model.num_vertices());
}

Shape3D reconstruct_landmarks(const MorphableModel& model, const Eigen::VectorXd& id_coeffs,
                              const Eigen::VectorXd& exp_coeffs)
{
    if (id_coeffs.size() != model.num_id() || exp_coeffs.size() != model.num_exp())
    {
        throw std::invalid_argument("reconstruct_landmarks: coefficient length mismatch");
    }
    const auto count = static_cast<int>(model.landmark_indices.size());
    Shape3D out(3, count);
    for (int i = 0; i < count; ++i)
    {
        const Eigen::Index row = 3 * static_cast<Eigen::Index>(model.landmark_indices[i]);
        Eigen::Vector3d p = model.mean_shape.segment<3>(row).cast<double>();
        if (model.num_id() > 0)
        {
            p.noalias() += model.id_basis.middleRows<3>(row).cast<double>() * id_coeffs;
        }
        if (model.num_exp() > 0)
        {
            p.noalias() += model.exp_basis.middleRows<3>(row).cast<double>() * exp_coeffs;
        }
        out.col(i) = p;
    }
    return out;
}

bool is_rotation(const Eigen::Matrix3d& rotation, double tol)
{
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    return (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(rotation.determinant() - 1.0) <= tol;
}

Points2D project(const Shape3D& shape, const FitParams& params)
{
    if (!is_rotation(params.rotation))
    {
        throw std::invalid_argument("project: rotation is not orthonormal with det +1");
    }
    Points2D out = params.scale * (params.rotation.topRows<2>() * shape);
    out.colwise() += params.translation;
    return out;
}

Shape3D to_camera_space(const Shape3D& shape, const FitParams& params)
{
    if (!is_rotation(params.rotation))
    {
        throw std::invalid_argument("to_camera_space: rotation is not orthonormal with det +1");
    }
    Shape3D out = params.scale * (params.rotation * shape);
    out.row(0).array() += params.translation.x();
    out.row(1).array() += params.translation.y();
    return out;
}

Eigen::Matrix3d rotation_from_euler(const PoseAngles& angles)
{
    const double y = angles.yaw * kDegToRad;
    const double p = angles.pitch * kDegToRad;
    const double r = angles.roll * kDegToRad;
    Eigen::Matrix3d ry;
    ry << std::cos(y), 0.0, std::sin(y), 0.0, 1.0, 0.0, -std::sin(y), 0.0, std::cos(y);
    Eigen::Matrix3d rx;
    rx << 1.0, 0.0, 0.0, 0.0, std::cos(p), -std::sin(p), 0.0, std::sin(p), std::cos(p);
    Eigen::Matrix3d rz;
    rz << std::cos(r), -std::sin(r), 0.0, std::sin(r), std::cos(r), 0.0, 0.0, 0.0, 1.0;
    return ry * rx * rz;
}

PoseAngles euler_from_rotation(const Eigen::Matrix3d& rotation)
{
    // R(1,2) = -sin(pitch); yaw and roll come from the remaining column/row pairs.
    const double sin_pitch = std::clamp(-rotation(1, 2), -1.0, 1.0);
    const double pitch = std::asin(sin_pitch) * kRadToDeg;
    if (std::abs(pitch) >= kGimbalLimitDeg)
    {
        throw DegeneratePoseError("euler_from_rotation: pitch " + std::to_string(pitch) +
                                  " deg is inside the gimbal-lock neighbourhood");
    }
    PoseAngles out;
    out.pitch = pitch;
    out.yaw = std::atan2(rotation(0, 2), rotation(2, 2)) * kRadToDeg;
    out.roll = std::atan2(rotation(1, 0), rotation(1, 1)) * kRadToDeg;
    return out;
}

Eigen::VectorXd flatten(const Shape3D& shape)
{
    return Eigen::Map<const Eigen::VectorXd>(shape.data(), shape.size());
}

} // namespace poseaug
