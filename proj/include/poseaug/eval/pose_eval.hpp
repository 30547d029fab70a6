#pragma once

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/dataset/manifest.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace poseaug {

inline constexpr int kNumPoseBins = 5;
/// Lower edges of the five absolute-angle bins; the last bin is [60, 90] and absorbs larger angles.
inline constexpr std::array<double, kNumPoseBins + 1> kPoseBinEdges{0.0, 15.0, 30.0, 45.0, 60.0, 90.0};

struct SequencePose
{
    double mean_abs_yaw = 0.0;
    double mean_abs_pitch = 0.0;
};

/// Mean of per-frame |yaw| and |pitch|. Throws std::invalid_argument on an empty list.
SequencePose sequence_pose(const std::vector<PoseAngles>& per_frame);

/// Bin index 0..4 of a non-negative angle. Throws std::invalid_argument for negative or NaN input.
int pose_bin(double angle_abs);

struct PredictionRecord
{
    std::string entry_id;
    std::string predicted_label;
    std::string true_label;
};

/// Tab-separated (entry_id, predicted_label, true_label); '#' comments allowed.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

enum class PoseAxis
{
    yaw,
    pitch,
};

struct PoseBin
{
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    int correct = 0;

    /// Percentage; empty for bins without sequences.
    std::optional<double> accuracy() const;
};

struct PoseBinTable
{
    PoseAxis axis = PoseAxis::yaw;
    std::array<PoseBin, kNumPoseBins> bins;
};

struct EvalReport
{
    int total = 0;
    int correct = 0;
    double accuracy = 0.0; ///< percent
    PoseBinTable yaw;
    PoseBinTable pitch;
};

/**
 * Overall and pose-binned accuracy. Poses come from the manifest's mean_abs_yaw and
 * mean_abs_pitch columns.
 *
 * Throws std::invalid_argument on empty input, duplicate prediction ids, ids absent from the
 * manifest (all listed) or manifest rows without pose columns.
 */
EvalReport evaluate(const std::vector<PredictionRecord>& predictions, const std::vector<ManifestEntry>& manifest);

/// Fixed-width table, one row per axis and one column per bin.
std::string format_report_table(const EvalReport& report);

/// "key=value" lines, e.g. "yaw.bin0.count=3".
std::string format_report_kv(const EvalReport& report);

} // namespace poseaug
