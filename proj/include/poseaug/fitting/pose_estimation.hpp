#pragma once

#include "poseaug/core/morphable_model.hpp"

namespace poseaug {

/// The rigid part of FitParams: what a weak-perspective camera contributes.
struct WeakPerspectivePose
{
    double scale = 1.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();
};

/**
 * Least-squares weak-perspective camera from 3D-2D correspondences.
 *
 * Fits an unconstrained 2x3 affine map plus translation, normalises its two rows, completes
 * the third row with their cross product and snaps the result to the nearest rotation
 * (orthogonal Procrustes). Scale and translation are then re-solved in closed form for the
 * snapped rotation, which for exact weak-perspective data reproduces the affine estimate.
 *
 * Throws FitDegenerateError when either point set is (near) collinear or the affine normal
 * equations are rank deficient.
 */
WeakPerspectivePose estimate_pose(const Shape3D& points_3d, const Points2D& points_2d);

/// Root-mean-square pixel distance between two equally sized point sets.
double rms_distance(const Points2D& a, const Points2D& b);

} // namespace poseaug
