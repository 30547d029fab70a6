#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/render/image.hpp"

#include <array>

namespace poseaug {

/// x' = scale * R(angle) * x + translation.
struct Similarity2D
{
    double scale = 1.0;
    double angle = 0.0; ///< degrees, turning +x toward +y
    Eigen::Vector2d translation = Eigen::Vector2d::Zero();

    Eigen::Matrix<double, 2, 3> matrix() const;
    Similarity2D inverse() const;
    Points2D apply(const Points2D& points) const;
};

/**
 * Target frame for alignment: the canonical positions of five landmarks (outer and inner corner
 * of each eye, nose tip) and the size of the aligned canvas.
 */
struct AlignmentReference
{
    std::array<int, 5> landmark_indices{36, 39, 42, 45, 30};
    std::array<Eigen::Vector2d, 5> points{Eigen::Vector2d(70, 100), Eigen::Vector2d(110, 100),
                                          Eigen::Vector2d(146, 100), Eigen::Vector2d(186, 100),
                                          Eigen::Vector2d(128, 150)};
    int width = 256;
    int height = 256;
};

/// Least-squares similarity mapping `from` onto `to`. Throws AlignmentError if either set is collinear.
Similarity2D estimate_similarity(const Points2D& from, const Points2D& to);

struct AlignedFrame
{
    Image image;
    Points2D landmarks;
    Similarity2D transform;
};

/// Warps the frame (bilinear, replicated border) and its landmarks into the reference frame.
AlignedFrame align_face(const Image& frame, const Points2D& landmarks, const AlignmentReference& reference = {});

inline constexpr int kMouthRoiSize = 96;
inline constexpr int kFirstMouthLandmark = 48;

/// Landmarks 48..67.
Points2D mouth_landmarks(const Points2D& landmarks);

/**
 * 96x96 window whose top-left corner is round(centroid) - 48, shifted to stay inside the image.
 * Throws SizeError when the image is smaller than 96x96.
 */
Image crop_mouth(const Image& aligned, const Points2D& mouth);

} // namespace poseaug
