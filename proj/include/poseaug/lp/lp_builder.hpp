#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/dataset/manifest.hpp"
#include "poseaug/dataset/sequence.hpp"
#include "poseaug/fitting/fitting.hpp"
#include "poseaug/render/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace poseaug {

inline constexpr double kMaxDeltaYaw = 45.0;
inline constexpr double kMaxDeltaPitch = 30.0;

struct PoseIncrement
{
    double delta_yaw = 0.0;   ///< degrees, |.| <= 45
    double delta_pitch = 0.0; ///< degrees, |.| <= 30
    std::uint64_t seed_used = 0;
};

/**
 * Uniform increments whose signs follow the first frame, axis by axis: yaw on [0, 45] when the
 * first-frame yaw is >= 0, else [-45, 0]; pitch likewise on [0, 30] / [-30, 0].
 */
PoseIncrement sample_pose_increment(std::uint64_t seed, const PoseAngles& first_frame_pose);

struct AugmentedVideo
{
    SequenceRecord video;
    /// Parameters of the face in each rendered frame.
    std::vector<FitParams> params;
};

/**
 * Renders every frame with the one shared increment. Frame count, frame size and labels carry
 * over; landmarks are replaced by the rotated projections and the id gains an "_lp" suffix.
 *
 * Throws FitDegenerateError naming the frame when any fit failed, std::invalid_argument when
 * fits and frames disagree in length.
 */
AugmentedVideo augment_video(const SequenceRecord& video, const MorphableModel& model,
                             const std::vector<FrameFit>& fits, const PoseIncrement& increment,
                             int grid_step = kDefaultGridStep);

struct LpConfig
{
    std::uint64_t seed = 0;
    int workers = 1;
    int grid_step = kDefaultGridStep;
    FitConfig fit;
    /// Builds with more skipped videos than this fraction fail.
    double max_skip_fraction = 0.1;
};

struct SkipRecord
{
    std::string entry_id;
    std::string reason;
};

struct LpResult
{
    std::vector<ManifestEntry> entries;
    std::vector<SkipRecord> skips;
};

/// Entry id of the augmented copy of a video.
std::string lp_entry_id(const std::string& entry_id);

/**
 * Builds the large-pose corpus under out_dir: one augmented video per input under
 * out_dir/videos/<id>_lp, out_dir/manifest.tsv listing originals and augmented entries sorted by
 * id, and out_dir/skips.tsv. Each video draws its increment from derive_seed(seed, entry_id).
 *
 * Unreadable or unfittable videos become skip records; the outputs are still written, then
 * PipelineError is thrown if the skip fraction exceeds config.max_skip_fraction.
 */
LpResult build_lp(const std::vector<ManifestEntry>& manifest, const std::filesystem::path& manifest_path,
                  const MorphableModel& model, const std::filesystem::path& out_dir, const LpConfig& config);

/// Path of target written relative to base (generic separators).
std::string relative_path(const std::filesystem::path& target, const std::filesystem::path& base);

} // namespace poseaug
