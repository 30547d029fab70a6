#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace poseaug {

/// Options shared by the subcommands; each uses the subset it needs.
struct PipelineConfig
{
    std::filesystem::path manifest;
    std::filesystem::path out;
    std::filesystem::path model;
    std::filesystem::path aug_config;
    std::filesystem::path vocab;
    std::filesystem::path predictions;
    std::uint64_t seed = 0;
    /// Set when the seed came from the command line; otherwise an aug config may supply one.
    bool seed_given = false;
    int workers = 1;
    int grid_step = 16;
    bool aug2d = false;
    int verbosity = 0;
};

/// Exit codes of the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/**
 * Each command writes its artifacts under config.out and returns an exit code. Problems are
 * reported on `err` as tab-separated lines: "error", command, entry id or "-", message.
 *
 * fit:        <out>/manifest.tsv with frame counts and mean absolute poses, <out>/failures.tsv.
 *             Succeeds when at most 10% of videos fail.
 * build-lp:   see build_lp.
 * preprocess: aligned, cropped and augmented 88x88 mouth clips under <out>/videos, <out>/manifest.tsv.
 * segment:    29-frame clips under <out>/clips, <out>/manifest.tsv with splits, <out>/rejections.tsv.
 * evaluate:   <out>/report.txt and <out>/report.kv; the table is also printed on `log`.
 */
int cmd_fit(const PipelineConfig& config, std::ostream& log, std::ostream& err);
int cmd_build_lp(const PipelineConfig& config, std::ostream& log, std::ostream& err);
int cmd_preprocess(const PipelineConfig& config, std::ostream& log, std::ostream& err);
int cmd_segment(const PipelineConfig& config, std::ostream& log, std::ostream& err);
int cmd_evaluate(const PipelineConfig& config, std::ostream& log, std::ostream& err);

} // namespace poseaug
