#include "poseaug/lp/lp_builder.hpp"
#include "poseaug/core/errors.hpp"
#include "poseaug/core/random.hpp"
#include "poseaug/eval/pose_eval.hpp"
#include "poseaug/render/render_pose.hpp"
#include "poseaug/util/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace poseaug {

PoseIncrement sample_pose_increment(std::uint64_t seed, const PoseAngles& first_frame_pose)
{
    Rng rng(seed);
    const double yaw = rng.uniform(0.0, kMaxDeltaYaw);
    const double pitch = rng.uniform(0.0, kMaxDeltaPitch);
    PoseIncrement inc;
    inc.delta_yaw = first_frame_pose.yaw >= 0.0 ? yaw : -yaw;
    inc.delta_pitch = first_frame_pose.pitch >= 0.0 ? pitch : -pitch;
    inc.seed_used = seed;
    return inc;
}

AugmentedVideo augment_video(const SequenceRecord& video, const MorphableModel& model,
                             const std::vector<FrameFit>& fits, const PoseIncrement& increment, int grid_step)
{
    if (fits.size() != video.frames.size())
    {
        throw std::invalid_argument("augment_video: " + std::to_string(fits.size()) + " fits for " +
                                    std::to_string(video.frames.size()) + " frames");
    }
    for (std::size_t i = 0; i < fits.size(); ++i)
    {
        if (!fits[i].ok())
        {
            throw FitDegenerateError("frame " + std::to_string(i) + ": " + fits[i].error);
        }
    }
    AugmentedVideo out;
    out.video.id = lp_entry_id(video.id);
    out.video.word = video.word;
    out.video.split = video.split;
    out.video.source_id = video.id;
    const PoseDelta delta{increment.delta_yaw, increment.delta_pitch};
    for (std::size_t i = 0; i < fits.size(); ++i)
    {
        RenderedFrame frame = render_new_pose(video.frames[i], model, fits[i].result->params, delta, grid_step);
        out.video.frames.push_back(std::move(frame.image));
        out.video.landmarks.push_back(std::move(frame.landmarks));
        out.params.push_back(std::move(frame.params));
    }
    return out;
}

std::string lp_entry_id(const std::string& entry_id)
{
    return entry_id + "_lp";
}

std::string relative_path(const std::filesystem::path& target, const std::filesystem::path& base)
{
    const auto t = std::filesystem::weakly_canonical(std::filesystem::absolute(target));
    const auto b = std::filesystem::weakly_canonical(std::filesystem::absolute(base));
    return t.lexically_relative(b).generic_string();
}

namespace {

struct VideoOutcome
{
    std::optional<ManifestEntry> original_pose; // original row with pose columns refreshed
    std::optional<ManifestEntry> augmented;
    std::optional<SkipRecord> skip;
};

SequencePose pose_summary(const std::vector<FitParams>& params)
{
    std::vector<PoseAngles> angles;
    angles.reserve(params.size());
    for (const auto& p : params)
    {
        angles.push_back(euler_from_rotation(p.rotation));
    }
    return sequence_pose(angles);
}

VideoOutcome process_video(const ManifestEntry& entry, const std::filesystem::path& manifest_path,
                           const MorphableModel& model, const std::filesystem::path& out_dir, const LpConfig& config)
{
    VideoOutcome outcome;
    try
    {
        SequenceRecord video = load_video(resolve_entry_path(manifest_path, entry), true);
        video.id = entry.entry_id;
        video.word = entry.word;
        video.split = entry.split;
        const auto fits = fit_sequence(model, video.landmarks, config.fit);
        if (!fits.front().ok())
        {
            throw FitDegenerateError("frame 0: " + fits.front().error);
        }
        std::vector<FitParams> original;
        for (const auto& f : fits)
        {
            if (f.ok())
            {
                original.push_back(f.result->params);
            }
        }
        const PoseAngles first = euler_from_rotation(fits.front().result->params.rotation);
        const std::uint64_t seed = derive_seed(config.seed, entry.entry_id);
        const PoseIncrement inc = sample_pose_increment(seed, first);
        AugmentedVideo aug = augment_video(video, model, fits, inc, config.grid_step);
        const SequencePose rotated_pose = pose_summary(aug.params);

        const std::string rel = "videos/" + aug.video.id;
        save_video(aug.video, out_dir / rel);

        ManifestEntry row;
        row.entry_id = aug.video.id;
        row.source_id = entry.entry_id;
        row.path = rel;
        row.word = entry.word;
        row.split = entry.split;
        row.frame_count = aug.video.frame_count();
        row.mean_abs_yaw = rotated_pose.mean_abs_yaw;
        row.mean_abs_pitch = rotated_pose.mean_abs_pitch;
        row.delta_yaw = inc.delta_yaw;
        row.delta_pitch = inc.delta_pitch;
        row.seed = seed;
        outcome.augmented = std::move(row);

        ManifestEntry refreshed = entry;
        const SequencePose pose = pose_summary(original);
        refreshed.mean_abs_yaw = pose.mean_abs_yaw;
        refreshed.mean_abs_pitch = pose.mean_abs_pitch;
        refreshed.frame_count = video.frame_count();
        outcome.original_pose = std::move(refreshed);
    }
    catch (const std::exception& e)
    {
        std::string reason = e.what();
        std::replace(reason.begin(), reason.end(), '\t', ' ');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        outcome.skip = SkipRecord{entry.entry_id, reason};
    }
    return outcome;
}

} // namespace

LpResult build_lp(const std::vector<ManifestEntry>& manifest, const std::filesystem::path& manifest_path,
                  const MorphableModel& model, const std::filesystem::path& out_dir, const LpConfig& config)
{
    config.fit.validate();
    std::filesystem::create_directories(out_dir);
    std::vector<VideoOutcome> outcomes(manifest.size());
    parallel_for(manifest.size(), config.workers, [&](std::size_t i) {
        outcomes[i] = process_video(manifest[i], manifest_path, model, out_dir, config);
    });

    LpResult result;
    for (std::size_t i = 0; i < manifest.size(); ++i)
    {
        ManifestEntry original = outcomes[i].original_pose.value_or(manifest[i]);
        original.path = relative_path(resolve_entry_path(manifest_path, manifest[i]), out_dir);
        result.entries.push_back(std::move(original));
        if (outcomes[i].augmented)
        {
            result.entries.push_back(*outcomes[i].augmented);
        }
        if (outcomes[i].skip)
        {
            result.skips.push_back(*outcomes[i].skip);
        }
    }
    sort_by_id(result.entries);
    std::sort(result.skips.begin(), result.skips.end(),
              [](const SkipRecord& a, const SkipRecord& b) { return a.entry_id < b.entry_id; });

    write_manifest(result.entries, out_dir / "manifest.tsv");
    std::ostringstream skips;
    skips << "# entry_id\treason\n";
    for (const auto& s : result.skips)
    {
        skips << s.entry_id << '\t' << s.reason << '\n';
    }
    write_text_file(out_dir / "skips.tsv", skips.str());

    if (!manifest.empty() &&
        static_cast<double>(result.skips.size()) > config.max_skip_fraction * static_cast<double>(manifest.size()))
    {
        throw PipelineError("build_lp: skipped " + std::to_string(result.skips.size()) + " of " +
                            std::to_string(manifest.size()) + " videos");
    }
    return result;
}

} // namespace poseaug
