#include "poseaug/preprocess/align.hpp"
#include "poseaug/core/errors.hpp"

#include "Eigen/Dense"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace poseaug {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool collinear(const Points2D& pts)
{
    const Eigen::Vector2d mean = pts.rowwise().mean();
    const Points2D centred = pts.colwise() - mean;
    const Eigen::Matrix2d scatter = centred * centred.transpose();
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(scatter).eigenvalues();
    return ev(1) <= 0.0 || ev(0) <= 1e-9 * ev(1);
}

} // namespace

Eigen::Matrix<double, 2, 3> Similarity2D::matrix() const
{
    const double c = scale * std::cos(angle * kDegToRad);
    const double s = scale * std::sin(angle * kDegToRad);
    Eigen::Matrix<double, 2, 3> m;
    m << c, -s, translation.x(), s, c, translation.y();
    return m;
}

Similarity2D Similarity2D::inverse() const
{
    Similarity2D inv;
    inv.scale = 1.0 / scale;
    inv.angle = -angle;
    const double c = std::cos(-angle * kDegToRad) * inv.scale;
    const double s = std::sin(-angle * kDegToRad) * inv.scale;
    inv.translation = -Eigen::Vector2d(c * translation.x() - s * translation.y(), s * translation.x() + c * translation.y());
    return inv;
}

Points2D Similarity2D::apply(const Points2D& points) const
{
    const Eigen::Matrix<double, 2, 3> m = matrix();
    return (m.leftCols<2>() * points).colwise() + m.col(2);
}

Similarity2D estimate_similarity(const Points2D& from, const Points2D& to)
{
    if (from.cols() != to.cols() || from.cols() < 2)
    {
        throw std::invalid_argument("estimate_similarity: need matching point sets of at least 2 points");
    }
    if (!from.allFinite() || !to.allFinite())
    {
        throw AlignmentError("estimate_similarity: non-finite points");
    }
    if (collinear(from) || collinear(to))
    {
        throw AlignmentError("estimate_similarity: alignment points are collinear");
    }
    const Eigen::Vector2d mf = from.rowwise().mean();
    const Eigen::Vector2d mt = to.rowwise().mean();
    const Points2D p = from.colwise() - mf;
    const Points2D q = to.colwise() - mt;
    // Complex least squares: q ~ (a + ib) p.
    const double denom = p.squaredNorm();
    const double a = (p.row(0).dot(q.row(0)) + p.row(1).dot(q.row(1))) / denom;
    const double b = (p.row(0).dot(q.row(1)) - p.row(1).dot(q.row(0))) / denom;
    Similarity2D out;
    out.scale = std::hypot(a, b);
    out.angle = std::atan2(b, a) / kDegToRad;
    out.translation = mt - Eigen::Vector2d(a * mf.x() - b * mf.y(), b * mf.x() + a * mf.y());
    return out;
}

AlignedFrame align_face(const Image& frame, const Points2D& landmarks, const AlignmentReference& reference)
{
    Points2D from(2, 5);
    Points2D to(2, 5);
    for (int k = 0; k < 5; ++k)
    {
        const int idx = reference.landmark_indices[static_cast<std::size_t>(k)];
        if (idx < 0 || idx >= landmarks.cols())
        {
            throw std::invalid_argument("align_face: landmark index " + std::to_string(idx) + " out of range");
        }
        from.col(k) = landmarks.col(idx);
        to.col(k) = reference.points[static_cast<std::size_t>(k)];
    }
    AlignedFrame out;
    out.transform = estimate_similarity(from, to);
    out.image = warp_affine(frame, out.transform.inverse().matrix(), reference.width, reference.height);
    out.landmarks = out.transform.apply(landmarks);
    return out;
}

Points2D mouth_landmarks(const Points2D& landmarks)
{
    if (landmarks.cols() != kNumLandmarks)
    {
        throw std::invalid_argument("mouth_landmarks: expected 68 landmarks");
    }
    return landmarks.rightCols(kNumLandmarks - kFirstMouthLandmark);
}

Image crop_mouth(const Image& aligned, const Points2D& mouth)
{
    if (aligned.width < kMouthRoiSize || aligned.height < kMouthRoiSize)
    {
        throw SizeError("crop_mouth: image " + std::to_string(aligned.width) + "x" + std::to_string(aligned.height) +
                        " smaller than 96x96");
    }
    if (mouth.cols() == 0 || !mouth.allFinite())
    {
        throw std::invalid_argument("crop_mouth: no finite mouth landmarks");
    }
    const Eigen::Vector2d c = mouth.rowwise().mean();
    const long x0 = std::clamp(std::lround(c.x()) - kMouthRoiSize / 2, 0L, static_cast<long>(aligned.width - kMouthRoiSize));
    const long y0 =
        std::clamp(std::lround(c.y()) - kMouthRoiSize / 2, 0L, static_cast<long>(aligned.height - kMouthRoiSize));
    return crop(aligned, static_cast<int>(x0), static_cast<int>(y0), kMouthRoiSize, kMouthRoiSize);
}

} // namespace poseaug
