#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/fitting/pose_estimation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace poseaug {

struct FitConfig
{
    int max_alternations = 10;
    /// Stop once the reprojection RMSE changes by less than this many pixels.
    double convergence_tol = 1e-4;
    double reg_id = 1e-3 * kNumLandmarks;
    double reg_exp = 1e-3 * kNumLandmarks;

    void validate() const;
};

struct FitResult
{
    FitParams params;
    double reprojection_rmse = 0.0;
    int iterations_used = 0;
    bool converged = false;
    /// RMSE after each completed alternation.
    std::vector<double> rmse_history;
};

struct ShapeCoefficients
{
    Eigen::VectorXd id;
    Eigen::VectorXd exp;
};

/**
 * Regularised linear solve for the shape coefficients under a fixed pose.
 *
 * Minimises |f C R (mean + U_id p_id + U_exp p_exp)|_landmarks + t - Y|^2
 *         + reg_id |p_id / s_id|^2 + reg_exp |p_exp / s_exp|^2
 * jointly over (p_id, p_exp), where s_* are the model's basis scales (ones when absent).
 */
ShapeCoefficients estimate_coefficients(const MorphableModel& model, const WeakPerspectivePose& pose,
                                        const Points2D& landmarks, const FitConfig& config);

/// Reprojection RMSE of the model's landmarks under params.
double reprojection_rmse(const MorphableModel& model, const FitParams& params, const Points2D& landmarks);

/**
 * Fits pose and shape coefficients to 68 landmarks by alternating estimate_coefficients and
 * estimate_pose. A pose update is only kept if it does not increase the reprojection error.
 *
 * Without warm_start the loop starts from the pose of the mean shape and the first alternation
 * never counts as converged. With warm_start the baseline error is that of the given params.
 * The returned params are the best seen, not necessarily the last.
 */
FitResult fit_frame(const MorphableModel& model, const Points2D& landmarks, const FitConfig& config,
                    const FitParams* warm_start = nullptr);

/// One entry of fit_sequence: either a result or the reason the frame failed.
struct FrameFit
{
    std::optional<FitResult> result;
    std::string error;

    bool ok() const { return result.has_value(); }
};

/// Fits every frame, warm-starting from the previous successful frame.
std::vector<FrameFit> fit_sequence(const MorphableModel& model, const std::vector<Points2D>& frames,
                                   const FitConfig& config);

FitParams to_fit_params(const WeakPerspectivePose& pose, ShapeCoefficients coeffs);
WeakPerspectivePose pose_of(const FitParams& params);

} // namespace poseaug
