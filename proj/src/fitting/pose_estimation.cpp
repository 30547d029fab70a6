#include "poseaug/fitting/pose_estimation.hpp"
#include "poseaug/core/errors.hpp"

#include "Eigen/Dense"

#include <cmath>
#include <stdexcept>

namespace poseaug {

namespace {

constexpr double kCollinearRatio = 1e-9;

bool is_collinear_2d(const Points2D& points)
{
    const Eigen::Vector2d centroid = points.rowwise().mean();
    const Eigen::Matrix2Xd centered = points.colwise() - centroid;
    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(centered * centered.transpose());
    const auto& s = svd.singularValues();
    return s(0) <= 0.0 || s(1) <= kCollinearRatio * kCollinearRatio * s(0);
}

bool is_collinear_3d(const Shape3D& points)
{
    const Eigen::Vector3d centroid = points.rowwise().mean();
    const Eigen::Matrix3Xd centered = points.colwise() - centroid;
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(centered * centered.transpose());
    const auto& s = svd.singularValues();
    return s(0) <= 0.0 || s(1) <= kCollinearRatio * kCollinearRatio * s(0);
}

} // namespace

double rms_distance(const Points2D& a, const Points2D& b)
{
    if (a.cols() != b.cols() || a.cols() == 0)
    {
        throw std::invalid_argument("rms_distance: point sets must be equally sized and non-empty");
    }
    return std::sqrt((a - b).colwise().squaredNorm().mean());
}

WeakPerspectivePose estimate_pose(const Shape3D& points_3d, const Points2D& points_2d)
{
    const Eigen::Index n = points_3d.cols();
    if (n != points_2d.cols())
    {
        throw std::invalid_argument("estimate_pose: 3D and 2D point counts differ");
    }
    if (n < 4)
    {
        throw FitDegenerateError("estimate_pose: at least 4 correspondences are required");
    }
    if (!points_3d.allFinite() || !points_2d.allFinite())
    {
        throw std::invalid_argument("estimate_pose: non-finite coordinates");
    }
    if (is_collinear_2d(points_2d) || is_collinear_3d(points_3d))
    {
        throw FitDegenerateError("estimate_pose: collinear point set");
    }

    // Affine camera: [x y]^T = M * X + t, solved as two 4-parameter least-squares problems
    // sharing one design matrix.
    Eigen::MatrixXd design(n, 4);
    design.leftCols<3>() = points_3d.transpose();
    design.col(3).setOnes();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 4)
    {
        throw FitDegenerateError("estimate_pose: rank-deficient normal equations (coplanar 3D points)");
    }
    const Eigen::Matrix<double, 4, 2> affine = qr.solve(Eigen::MatrixXd(points_2d.transpose()));

    const Eigen::Vector3d row0 = affine.col(0).head<3>();
    const Eigen::Vector3d row1 = affine.col(1).head<3>();
    const double norm0 = row0.norm();
    const double norm1 = row1.norm();
    if (norm0 <= 0.0 || norm1 <= 0.0)
    {
        throw FitDegenerateError("estimate_pose: affine camera has a zero row");
    }

    Eigen::Matrix3d approx;
    approx.row(0) = row0 / norm0;
    approx.row(1) = row1 / norm1;
    approx.row(2) = approx.row(0).cross(approx.row(1));

    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(approx, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    const Eigen::Matrix3d v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0)
    {
        u.col(2) *= -1.0;
    }

    WeakPerspectivePose pose;
    pose.rotation = u * v.transpose();
    pose.scale = 0.5 * (norm0 + norm1);
    pose.translation = affine.row(3).transpose();

    // Closed-form scale and translation for the snapped rotation.
    const Eigen::Vector3d mean_3d = points_3d.rowwise().mean();
    const Eigen::Vector2d mean_2d = points_2d.rowwise().mean();
    const Eigen::Matrix2Xd rotated =
        pose.rotation.topRows<2>() * (points_3d.colwise() - mean_3d);
    const Eigen::Matrix2Xd target = points_2d.colwise() - mean_2d;
    const double denom = rotated.squaredNorm();
    const double scale = denom > 0.0 ? (rotated.array() * target.array()).sum() / denom : 0.0;
    if (scale > 0.0)
    {
        pose.scale = scale;
        pose.translation = mean_2d - scale * pose.rotation.topRows<2>() * mean_3d;
    }
    return pose;
}

} // namespace poseaug
