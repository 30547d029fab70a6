#include "poseaug/render/scene.hpp"
#include "poseaug/core/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace poseaug {

namespace {

std::vector<Eigen::Vector2d> image_positions(const Shape3D& face_camera)
{
    std::vector<Eigen::Vector2d> out;
    out.reserve(static_cast<std::size_t>(face_camera.cols()));
    for (Eigen::Index i = 0; i < face_camera.cols(); ++i)
    {
        out.emplace_back(face_camera(0, i), face_camera(1, i));
    }
    return out;
}

std::vector<int> grid_coordinates(int extent, int step)
{
    std::vector<int> out;
    for (int v = 0; v <= extent; v += step)
    {
        out.push_back(v);
    }
    return out;
}

} // namespace

void SceneMesh::validate(int source_width, int source_height) const
{
    const auto n = vertices.cols();
    if (uv.cols() != n || static_cast<Eigen::Index>(face_vertex_mask.size()) != n)
    {
        throw std::invalid_argument("SceneMesh: vertex, uv and mask counts differ");
    }
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (uv(0, i) < 0.0 || uv(1, i) < 0.0 || uv(0, i) > source_width || uv(1, i) > source_height)
        {
            throw std::invalid_argument("SceneMesh: uv outside source image");
        }
    }
    for (const auto& t : triangles)
    {
        for (int v : t)
        {
            if (v < 0 || v >= n)
            {
                throw std::invalid_argument("SceneMesh: triangle references a missing vertex");
            }
        }
    }
}

std::vector<Eigen::Vector3d> estimate_background_depth(const Shape3D& face_camera, const Image& image, int grid_step)
{
    if (face_camera.cols() == 0)
    {
        throw std::invalid_argument("estimate_background_depth: empty face mesh");
    }
    if (grid_step <= 0)
    {
        throw std::invalid_argument("estimate_background_depth: grid_step must be positive");
    }
    if (image.empty())
    {
        throw SizeError("estimate_background_depth: empty image");
    }
    const double far_depth = face_camera.row(2).minCoeff();

    const auto positions = image_positions(face_camera);
    std::vector<Eigen::Vector2d> hull;
    if (positions.size() >= 3)
    {
        for (int idx : convex_hull(positions, false))
        {
            hull.push_back(positions[static_cast<std::size_t>(idx)]);
        }
    }

    std::vector<Eigen::Vector2d> candidates;
    for (int y : grid_coordinates(image.height, grid_step))
    {
        for (int x : grid_coordinates(image.width, grid_step))
        {
            candidates.emplace_back(x, y);
        }
    }
    for (const Eigen::Vector2d& corner : {Eigen::Vector2d(image.width, 0), Eigen::Vector2d(0, image.height),
                                         Eigen::Vector2d(image.width, image.height)})
    {
        if (std::find(candidates.begin(), candidates.end(), corner) == candidates.end())
        {
            candidates.push_back(corner);
        }
    }

    std::vector<Eigen::Vector3d> anchors;
    for (const auto& c : candidates)
    {
        if (!in_convex_polygon(hull, c))
        {
            anchors.emplace_back(c.x(), c.y(), far_depth);
        }
    }
    if (anchors.empty())
    {
        throw NoBackgroundError("face hull covers the entire image; no background anchors left");
    }
    return anchors;
}

SceneMesh build_scene_mesh(const Shape3D& face_camera, const Image& image, const std::vector<Eigen::Vector3d>& anchors)
{
    if (anchors.empty())
    {
        throw std::invalid_argument("build_scene_mesh: no anchors");
    }
    const Eigen::Index n_face = face_camera.cols();
    const Eigen::Index n = n_face + static_cast<Eigen::Index>(anchors.size());

    SceneMesh mesh;
    mesh.vertices.resize(3, n);
    mesh.vertices.leftCols(n_face) = face_camera;
    for (std::size_t i = 0; i < anchors.size(); ++i)
    {
        mesh.vertices.col(n_face + static_cast<Eigen::Index>(i)) = anchors[i];
    }
    mesh.face_vertex_mask.assign(static_cast<std::size_t>(n), false);
    std::fill_n(mesh.face_vertex_mask.begin(), n_face, true);

    mesh.uv = mesh.vertices.topRows<2>();
    mesh.uv.row(0) = mesh.uv.row(0).cwiseMax(0.0).cwiseMin(static_cast<double>(image.width));
    mesh.uv.row(1) = mesh.uv.row(1).cwiseMax(0.0).cwiseMin(static_cast<double>(image.height));

    std::vector<Eigen::Vector2d> positions;
    positions.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
    {
        positions.emplace_back(mesh.vertices(0, i), mesh.vertices(1, i));
    }
    std::vector<Edge> constraints;
    if (n_face >= 3)
    {
        const auto face_hull =
            convex_hull(std::span<const Eigen::Vector2d>(positions.data(), static_cast<std::size_t>(n_face)), false);
        if (face_hull.size() >= 3)
        {
            for (std::size_t i = 0; i < face_hull.size(); ++i)
            {
                constraints.push_back({face_hull[i], face_hull[(i + 1) % face_hull.size()]});
            }
        }
    }
    mesh.triangles = triangulate(positions, constraints);
    return mesh;
}

SceneMesh rotate_scene(const SceneMesh& mesh, double delta_yaw, double delta_pitch, const Eigen::Vector3d& pivot)
{
    SceneMesh out = mesh;
    if (delta_yaw == 0.0 && delta_pitch == 0.0)
    {
        return out;
    }
    const Eigen::Matrix3d rotation = rotation_from_euler({delta_yaw, delta_pitch, 0.0});
    out.vertices = (rotation * (mesh.vertices.colwise() - pivot)).colwise() + pivot;
    return out;
}

Eigen::Vector3d face_centroid(const SceneMesh& mesh)
{
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    int count = 0;
    for (Eigen::Index i = 0; i < mesh.vertices.cols(); ++i)
    {
        if (mesh.face_vertex_mask[static_cast<std::size_t>(i)])
        {
            sum += mesh.vertices.col(i);
            ++count;
        }
    }
    if (count == 0)
    {
        throw std::invalid_argument("face_centroid: mesh has no face vertices");
    }
    return sum / count;
}

} // namespace poseaug
