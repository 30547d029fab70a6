#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/render/image.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace poseaug {

/// A video: ordered frames with optional per-frame 68-point landmarks and metadata.
struct SequenceRecord
{
    std::string id;
    std::string word;
    std::string split;
    std::vector<Image> frames;
    /// Empty or one 2x68 set per frame.
    std::vector<Points2D> landmarks;
    /// Sentence id and centre frame for clips cut out of longer recordings.
    std::string source_id;
    int source_mid_frame = -1;

    int frame_count() const { return static_cast<int>(frames.size()); }
};

/**
 * Video directories hold frame_0000.ppm, frame_0001.ppm, ... and optional sidecar landmark
 * files frame_0000.txt, ... with 68 lines of "x y".
 */
std::filesystem::path frame_image_path(const std::filesystem::path& dir, int index);
std::filesystem::path frame_landmark_path(const std::filesystem::path& dir, int index);

/// Number of consecutive frame images starting at frame_0000.ppm.
int count_frames(const std::filesystem::path& dir);

Points2D read_landmarks(const std::filesystem::path& path);
void write_landmarks(const Points2D& landmarks, const std::filesystem::path& path);

/// Landmark sidecars only; every frame image must have one. Throws FormatError otherwise.
std::vector<Points2D> load_video_landmarks(const std::filesystem::path& dir);

/// Frames and, when require_landmarks or all sidecars exist, landmarks.
SequenceRecord load_video(const std::filesystem::path& dir, bool require_landmarks);

/// Writes frames and (if present) landmarks, replacing any existing frame files.
void save_video(const SequenceRecord& video, const std::filesystem::path& dir);

} // namespace poseaug
