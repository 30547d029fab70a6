#include "poseaug/fitting/fitting.hpp"
#include "poseaug/core/errors.hpp"

#include "Eigen/Dense"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace poseaug {

void FitConfig::validate() const
{
    if (max_alternations < 1)
    {
        throw std::invalid_argument("FitConfig: max_alternations must be >= 1");
    }
    if (!(convergence_tol >= 0.0) || !(reg_id >= 0.0) || !(reg_exp >= 0.0))
    {
        throw std::invalid_argument("FitConfig: tolerances and regularisation must be >= 0");
    }
}

FitParams to_fit_params(const WeakPerspectivePose& pose, ShapeCoefficients coeffs)
{
    FitParams params;
    params.scale = pose.scale;
    params.rotation = pose.rotation;
    params.translation = pose.translation;
    params.id_coeffs = std::move(coeffs.id);
    params.exp_coeffs = std::move(coeffs.exp);
    return params;
}

WeakPerspectivePose pose_of(const FitParams& params)
{
    return {params.scale, params.rotation, params.translation};
}

ShapeCoefficients estimate_coefficients(const MorphableModel& model, const WeakPerspectivePose& pose,
                                        const Points2D& landmarks, const FitConfig& config)
{
    const auto n_lm = static_cast<Eigen::Index>(model.landmark_indices.size());
    if (landmarks.cols() != n_lm)
    {
        throw std::invalid_argument("estimate_coefficients: landmark count does not match the model");
    }
    if (!is_rotation(pose.rotation) || !(pose.scale > 0.0))
    {
        throw std::invalid_argument("estimate_coefficients: invalid pose");
    }
    const Eigen::Index k_id = model.num_id();
    const Eigen::Index k_exp = model.num_exp();
    const Eigen::Index k = k_id + k_exp;
    ShapeCoefficients out{Eigen::VectorXd::Zero(k_id), Eigen::VectorXd::Zero(k_exp)};
    if (k == 0)
    {
        return out;
    }

    const Eigen::Matrix<double, 2, 3> camera = pose.scale * pose.rotation.topRows<2>();
    Eigen::MatrixXd design(2 * n_lm, k);
    Eigen::VectorXd rhs(2 * n_lm);
    for (Eigen::Index i = 0; i < n_lm; ++i)
    {
        const Eigen::Index row = 3 * static_cast<Eigen::Index>(model.landmark_indices[i]);
        if (k_id > 0)
        {
            design.block(2 * i, 0, 2, k_id) = camera * model.id_basis.middleRows<3>(row).cast<double>();
        }
        if (k_exp > 0)
        {
            design.block(2 * i, k_id, 2, k_exp) =
                camera * model.exp_basis.middleRows<3>(row).cast<double>();
        }
        rhs.segment<2>(2 * i) = landmarks.col(i) - pose.translation -
                                camera * model.mean_shape.segment<3>(row).cast<double>();
    }

    Eigen::MatrixXd normal = design.transpose() * design;
    for (Eigen::Index j = 0; j < k_id; ++j)
    {
        const double s = model.id_scales ? (*model.id_scales)[j] : 1.0;
        normal(j, j) += config.reg_id / (s * s);
    }
    for (Eigen::Index j = 0; j < k_exp; ++j)
    {
        const double s = model.exp_scales ? (*model.exp_scales)[j] : 1.0;
        normal(k_id + j, k_id + j) += config.reg_exp / (s * s);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
    qr.setThreshold(1e-13);
    if (qr.rank() < k)
    {
        throw FitDegenerateError("estimate_coefficients: singular regularised system");
    }
    const Eigen::VectorXd solution = qr.solve(design.transpose() * rhs);
    out.id = solution.head(k_id);
    out.exp = solution.tail(k_exp);
    return out;
}

double reprojection_rmse(const MorphableModel& model, const FitParams& params, const Points2D& landmarks)
{
    const Shape3D shape = reconstruct_landmarks(model, params.id_coeffs, params.exp_coeffs);
    return rms_distance(project(shape, params), landmarks);
}

FitResult fit_frame(const MorphableModel& model, const Points2D& landmarks, const FitConfig& config,
                    const FitParams* warm_start)
{
    config.validate();
    if (landmarks.cols() != kNumLandmarks || model.landmark_indices.size() != kNumLandmarks)
    {
        throw std::invalid_argument("fit_frame: expected 68 landmarks");
    }
    if (!landmarks.allFinite())
    {
        throw std::invalid_argument("fit_frame: non-finite landmark coordinates");
    }

    FitParams current;
    double previous_rmse = std::numeric_limits<double>::infinity();
    if (warm_start)
    {
        current = *warm_start;
        previous_rmse = reprojection_rmse(model, current, landmarks);
    }
    else
    {
        ShapeCoefficients zero{Eigen::VectorXd::Zero(model.num_id()), Eigen::VectorXd::Zero(model.num_exp())};
        const Shape3D mean_landmarks = reconstruct_landmarks(model, zero.id, zero.exp);
        current = to_fit_params(estimate_pose(mean_landmarks, landmarks), std::move(zero));
    }

    FitResult result;
    result.params = current;
    result.reprojection_rmse = warm_start ? previous_rmse : reprojection_rmse(model, current, landmarks);

    for (int iteration = 1; iteration <= config.max_alternations; ++iteration)
    {
        current = to_fit_params(pose_of(current),
                                estimate_coefficients(model, pose_of(current), landmarks, config));
        const Shape3D shape = reconstruct_landmarks(model, current.id_coeffs, current.exp_coeffs);
        double rmse = rms_distance(project(shape, current), landmarks);

        const WeakPerspectivePose candidate = estimate_pose(shape, landmarks);
        FitParams moved = current;
        moved.scale = candidate.scale;
        moved.rotation = candidate.rotation;
        moved.translation = candidate.translation;
        const double moved_rmse = rms_distance(project(shape, moved), landmarks);
        if (moved_rmse <= rmse)
        {
            current = std::move(moved);
            rmse = moved_rmse;
        }

        result.rmse_history.push_back(rmse);
        result.iterations_used = iteration;
        if (rmse < result.reprojection_rmse)
        {
            result.params = current;
            result.reprojection_rmse = rmse;
        }
        if (std::abs(previous_rmse - rmse) < config.convergence_tol)
        {
            result.converged = true;
            break;
        }
        previous_rmse = rmse;
    }
    return result;
}

std::vector<FrameFit> fit_sequence(const MorphableModel& model, const std::vector<Points2D>& frames,
                                   const FitConfig& config)
{
    if (frames.empty())
    {
        throw std::invalid_argument("fit_sequence: empty frame list");
    }
    std::vector<FrameFit> out;
    out.reserve(frames.size());
    const FitParams* previous = nullptr;
    for (const auto& landmarks : frames)
    {
        FrameFit frame;
        try
        {
            frame.result = fit_frame(model, landmarks, config, previous);
        }
        catch (const std::exception& e)
        {
            frame.error = e.what();
        }
        out.push_back(std::move(frame));
        previous = out.back().ok() ? &out.back().result->params : nullptr;
    }
    return out;
}

} // namespace poseaug
