#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/render/image.hpp"
#include "poseaug/render/triangulation.hpp"

#include <vector>

namespace poseaug {

inline constexpr int kDefaultGridStep = 16;

/// Image lifted to a 3D mesh: posed face vertices first, then background anchors.
struct SceneMesh
{
    /// Camera space: x, y in pixels, z toward the camera.
    Eigen::Matrix3Xd vertices;
    /// Source-image texture coordinates in pixels.
    Eigen::Matrix2Xd uv;
    std::vector<Triangle> triangles;
    std::vector<bool> face_vertex_mask;

    void validate(int source_width, int source_height) const;
};

/**
 * Background anchors on a regular grid (x = 0, step, 2 step, ... <= width, likewise y) plus the
 * four image corners, dropping those inside or on the face's 2D convex hull. All anchors sit on
 * the plane z = min z of the face, i.e. its farthest point from the camera.
 *
 * Throws NoBackgroundError when the face hull swallows every anchor.
 */
std::vector<Eigen::Vector3d> estimate_background_depth(const Shape3D& face_camera, const Image& image,
                                                       int grid_step = kDefaultGridStep);

/**
 * Triangulates face vertices and anchors together on their image positions. The face's convex
 * hull edges are constraints, so no triangle straddles the face outline. Texture coordinates are
 * the current image positions clamped to the image rectangle.
 */
SceneMesh build_scene_mesh(const Shape3D& face_camera, const Image& image,
                           const std::vector<Eigen::Vector3d>& anchors);

/// Rotates every vertex by rotation_from_euler({delta_yaw, delta_pitch, 0}) about pivot.
SceneMesh rotate_scene(const SceneMesh& mesh, double delta_yaw, double delta_pitch, const Eigen::Vector3d& pivot);

/// Centroid of the face vertices.
Eigen::Vector3d face_centroid(const SceneMesh& mesh);

} // namespace poseaug
