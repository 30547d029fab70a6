#pragma once

#include "poseaug/render/image.hpp"
#include "poseaug/render/scene.hpp"

namespace poseaug {

/**
 * Z-buffered, texture-mapped rasterisation of a scene mesh.
 *
 * Each output pixel centre (x + 0.5, y + 0.5) covered by a triangle takes the fragment nearest
 * the camera (largest z); equal depths go to the lower triangle index, so the result does not
 * depend on submission order. The fragment samples the source bilinearly at its
 * barycentric-interpolated uv. Uncovered pixels copy the nearest covered pixel in the same row
 * (left wins ties); rows with no coverage copy the nearest covered row.
 *
 * Throws RenderError for an empty mesh or one that covers no output pixel.
 */
Image rasterize(const SceneMesh& mesh, const Image& source, int out_width, int out_height);

} // namespace poseaug
