#include "poseaug/pipeline/commands.hpp"
#include "poseaug/core/errors.hpp"
#include "poseaug/core/model_io.hpp"
#include "poseaug/core/random.hpp"
#include "poseaug/dataset/manifest.hpp"
#include "poseaug/dataset/sequence.hpp"
#include "poseaug/eval/pose_eval.hpp"
#include "poseaug/fitting/fitting.hpp"
#include "poseaug/lp/lp_builder.hpp"
#include "poseaug/preprocess/align.hpp"
#include "poseaug/preprocess/augment.hpp"
#include "poseaug/preprocess/preprocess_video.hpp"
#include "poseaug/segment/word_segment.hpp"
#include "poseaug/util/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace poseaug {

namespace {

constexpr double kMaxFailureFraction = 0.1;

std::string one_line(std::string text)
{
    std::replace(text.begin(), text.end(), '\t', ' ');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

void report_error(std::ostream& err, const char* command, const std::string& id, const std::string& message)
{
    err << "error\t" << command << '\t' << (id.empty() ? "-" : id) << '\t' << one_line(message) << '\n';
}

bool too_many_failures(std::size_t failed, std::size_t total)
{
    return total > 0 && static_cast<double>(failed) > kMaxFailureFraction * static_cast<double>(total);
}

std::string failure_table(const std::vector<std::pair<std::string, std::string>>& failures)
{
    std::ostringstream out;
    out << "# entry_id\treason\n";
    for (const auto& [id, reason] : failures)
    {
        out << id << '\t' << one_line(reason) << '\n';
    }
    return out.str();
}

void require_path(const std::filesystem::path& p, const char* flag)
{
    if (p.empty())
    {
        throw std::invalid_argument(std::string("missing required option ") + flag);
    }
}

/// Runs body, mapping escaping exceptions to an error line and the failure exit code.
template <typename Body>
int guarded(const char* command, std::ostream& err, Body&& body)
{
    try
    {
        return body();
    }
    catch (const std::exception& e)
    {
        report_error(err, command, "", e.what());
        return kExitFailure;
    }
}

} // namespace

int cmd_fit(const PipelineConfig& config, std::ostream& log, std::ostream& err)
{
    return guarded("fit", err, [&] {
        require_path(config.manifest, "--manifest");
        require_path(config.out, "--out");
        require_path(config.model, "--model");
        const auto entries = read_manifest(config.manifest);
        const MorphableModel model = load_model(config.model);
        const FitConfig fit_config;
        std::filesystem::create_directories(config.out);

        std::vector<ManifestEntry> rows(entries.size());
        std::vector<std::optional<std::string>> errors(entries.size());
        parallel_for(entries.size(), config.workers, [&](std::size_t i) {
            ManifestEntry row = entries[i];
            const auto dir = resolve_entry_path(config.manifest, entries[i]);
            row.path = relative_path(dir, config.out);
            try
            {
                const auto landmarks = load_video_landmarks(dir);
                const auto fits = fit_sequence(model, landmarks, fit_config);
                std::vector<PoseAngles> angles;
                for (std::size_t k = 0; k < fits.size(); ++k)
                {
                    if (!fits[k].ok())
                    {
                        throw FitDegenerateError("frame " + std::to_string(k) + ": " + fits[k].error);
                    }
                    angles.push_back(euler_from_rotation(fits[k].result->params.rotation));
                }
                const SequencePose pose = sequence_pose(angles);
                row.frame_count = static_cast<int>(fits.size());
                row.mean_abs_yaw = pose.mean_abs_yaw;
                row.mean_abs_pitch = pose.mean_abs_pitch;
            }
            catch (const std::exception& e)
            {
                errors[i] = e.what();
            }
            rows[i] = std::move(row);
        });

        std::vector<std::pair<std::string, std::string>> failures;
        for (std::size_t i = 0; i < entries.size(); ++i)
        {
            if (errors[i])
            {
                failures.emplace_back(entries[i].entry_id, *errors[i]);
                report_error(err, "fit", entries[i].entry_id, *errors[i]);
            }
        }
        sort_by_id(rows);
        std::sort(failures.begin(), failures.end());
        write_manifest(rows, config.out / "manifest.tsv");
        write_text_file(config.out / "failures.tsv", failure_table(failures));
        log << "fit: " << entries.size() << " videos, " << failures.size() << " failed\n";
        return too_many_failures(failures.size(), entries.size()) ? kExitFailure : kExitOk;
    });
}

int cmd_build_lp(const PipelineConfig& config, std::ostream& log, std::ostream& err)
{
    return guarded("build-lp", err, [&] {
        require_path(config.manifest, "--manifest");
        require_path(config.out, "--out");
        require_path(config.model, "--model");
        const auto entries = read_manifest(config.manifest);
        const MorphableModel model = load_model(config.model);
        LpConfig lp;
        lp.seed = config.seed;
        lp.workers = config.workers;
        lp.grid_step = config.grid_step;
        try
        {
            const LpResult result = build_lp(entries, config.manifest, model, config.out, lp);
            for (const auto& s : result.skips)
            {
                report_error(err, "build-lp", s.entry_id, s.reason);
            }
            log << "build-lp: " << entries.size() << " videos in, " << result.entries.size() << " entries out, "
                << result.skips.size() << " skipped\n";
            return kExitOk;
        }
        catch (const PipelineError&)
        {
            std::ifstream skips(config.out / "skips.tsv");
            std::string line;
            while (std::getline(skips, line))
            {
                const auto f = split_tabs(line);
                if (!line.empty() && line[0] != '#' && f.size() == 2)
                {
                    report_error(err, "build-lp", f[0], f[1]);
                }
            }
            throw;
        }
    });
}

int cmd_preprocess(const PipelineConfig& config, std::ostream& log, std::ostream& err)
{
    return guarded("preprocess", err, [&] {
        require_path(config.manifest, "--manifest");
        require_path(config.out, "--out");
        const auto entries = read_manifest(config.manifest);
        Aug2DConfig aug = config.aug_config.empty() ? Aug2DConfig{} : load_aug2d_config(config.aug_config);
        if (!config.aug2d)
        {
            aug.enable_scale = false;
            aug.enable_degrade = false;
            aug.enable_patches = false;
        }
        const std::uint64_t seed = config.seed_given || config.aug_config.empty() ? config.seed : aug.seed;
        const AlignmentReference reference;
        std::filesystem::create_directories(config.out);

        std::vector<std::optional<ManifestEntry>> rows(entries.size());
        std::vector<std::optional<std::string>> errors(entries.size());
        parallel_for(entries.size(), config.workers, [&](std::size_t i) {
            const ManifestEntry& entry = entries[i];
            try
            {
                const SequenceRecord video = load_video(resolve_entry_path(config.manifest, entry), true);
                const std::uint64_t video_seed = derive_seed(seed, entry.entry_id);
                SequenceRecord out;
                out.id = entry.entry_id;
                out.frames = preprocess_video(video, aug, video_seed, reference).mouth_frames;
                const std::string rel = "videos/" + entry.entry_id;
                save_video(out, config.out / rel);
                ManifestEntry row = entry;
                row.path = rel;
                row.frame_count = out.frame_count();
                row.seed = video_seed;
                rows[i] = std::move(row);
            }
            catch (const std::exception& e)
            {
                errors[i] = e.what();
            }
        });

        std::vector<ManifestEntry> manifest;
        std::vector<std::pair<std::string, std::string>> failures;
        for (std::size_t i = 0; i < entries.size(); ++i)
        {
            if (rows[i])
            {
                manifest.push_back(*rows[i]);
            }
            else
            {
                failures.emplace_back(entries[i].entry_id, errors[i].value_or("unknown error"));
                report_error(err, "preprocess", entries[i].entry_id, failures.back().second);
            }
        }
        sort_by_id(manifest);
        std::sort(failures.begin(), failures.end());
        write_manifest(manifest, config.out / "manifest.tsv");
        write_text_file(config.out / "failures.tsv", failure_table(failures));
        log << "preprocess: " << manifest.size() << " videos written, " << failures.size() << " failed\n";
        return too_many_failures(failures.size(), entries.size()) ? kExitFailure : kExitOk;
    });
}

int cmd_segment(const PipelineConfig& config, std::ostream& log, std::ostream& err)
{
    return guarded("segment", err, [&] {
        require_path(config.manifest, "--manifest");
        require_path(config.out, "--out");
        const auto sentences = read_sentence_manifest(config.manifest);
        std::optional<std::set<std::string>> vocab;
        if (!config.vocab.empty())
        {
            vocab = read_vocabulary(config.vocab);
        }
        std::filesystem::create_directories(config.out);

        struct Rejection
        {
            std::string sentence;
            int word_index;
            std::string word;
            std::string reason;
        };
        struct SentenceOutcome
        {
            std::vector<WordInstance> clips;
            std::vector<std::string> clip_sources;
            std::vector<Rejection> rejections;
        };
        std::vector<SentenceOutcome> outcomes(sentences.size());
        parallel_for(sentences.size(), config.workers, [&](std::size_t i) {
            const SentenceRecord& s = sentences[i];
            SentenceOutcome& o = outcomes[i];
            std::optional<SequenceRecord> frames;
            std::string load_error;
            for (std::size_t w = 0; w < s.words.size(); ++w)
            {
                const WordBoundary& b = s.words[w];
                const int wi = static_cast<int>(w);
                if (vocab && !vocab->count(b.word))
                {
                    o.rejections.push_back({s.id, wi, b.word, "unknown_word"});
                    continue;
                }
                SegmentDecision d;
                try
                {
                    d = decide_segment(b, s.frame_count);
                }
                catch (const std::invalid_argument& e)
                {
                    o.rejections.push_back({s.id, wi, b.word, std::string("invalid_boundary: ") + e.what()});
                    continue;
                }
                if (!d.accepted)
                {
                    o.rejections.push_back({s.id, wi, b.word, to_string(d.reason)});
                    continue;
                }
                if (!frames && load_error.empty())
                {
                    try
                    {
                        std::filesystem::path dir(s.path);
                        if (dir.is_relative())
                        {
                            dir = config.manifest.parent_path() / dir;
                        }
                        frames = load_video(dir, false);
                        frames->id = s.id;
                        if (frames->frame_count() != s.frame_count)
                        {
                            load_error = "frame count " + std::to_string(frames->frame_count()) + " != " +
                                         std::to_string(s.frame_count);
                            frames.reset();
                        }
                    }
                    catch (const std::exception& e)
                    {
                        load_error = e.what();
                    }
                }
                if (!frames)
                {
                    o.rejections.push_back({s.id, wi, b.word, "unreadable: " + load_error});
                    continue;
                }
                char suffix[16];
                std::snprintf(suffix, sizeof(suffix), "_%02d_", wi);
                const std::string clip_id = s.id + suffix + b.word;
                const SequenceRecord clip = extract_window(*frames, b, d, clip_id);
                save_video(clip, config.out / "clips" / clip_id);
                o.clips.push_back({clip_id, b.word});
                o.clip_sources.push_back(s.id);
            }
        });

        std::vector<WordInstance> instances;
        std::map<std::string, std::string> source_of;
        std::vector<Rejection> rejections;
        for (auto& o : outcomes)
        {
            instances.insert(instances.end(), o.clips.begin(), o.clips.end());
            for (std::size_t k = 0; k < o.clips.size(); ++k)
            {
                source_of[o.clips[k].id] = o.clip_sources[k];
            }
            rejections.insert(rejections.end(), o.rejections.begin(), o.rejections.end());
        }
        const SplitResult split = balance_split(instances, config.seed, vocab ? &*vocab : nullptr);

        std::vector<ManifestEntry> manifest;
        for (const auto& inst : instances)
        {
            ManifestEntry row;
            row.entry_id = inst.id;
            row.source_id = source_of.at(inst.id);
            row.path = "clips/" + inst.id;
            row.word = inst.word;
            row.split = split.split_of.at(inst.id);
            row.frame_count = kClipLength;
            manifest.push_back(std::move(row));
        }
        sort_by_id(manifest);
        write_manifest(manifest, config.out / "manifest.tsv");

        std::sort(rejections.begin(), rejections.end(), [](const Rejection& a, const Rejection& b) {
            return a.sentence < b.sentence || (a.sentence == b.sentence && a.word_index < b.word_index);
        });
        std::ostringstream rej;
        rej << "# sentence_id\tword\treason\n";
        for (const auto& r : rejections)
        {
            rej << r.sentence << '\t' << r.word << '\t' << one_line(r.reason) << '\n';
        }
        write_text_file(config.out / "rejections.tsv", rej.str());

        std::ostringstream counts;
        counts << "# word\ttrain\tval\ttest\n";
        for (const auto& [word, c] : split.per_word)
        {
            counts << word << '\t' << c.train << '\t' << c.val << '\t' << c.test << '\n';
        }
        counts << "TOTAL\t" << split.totals.train << '\t' << split.totals.val << '\t' << split.totals.test << '\n';
        write_text_file(config.out / "split_counts.tsv", counts.str());

        log << "segment: " << instances.size() << " clips, " << rejections.size() << " rejected\n";
        return kExitOk;
    });
}

int cmd_evaluate(const PipelineConfig& config, std::ostream& log, std::ostream& err)
{
    return guarded("evaluate", err, [&] {
        require_path(config.manifest, "--manifest");
        require_path(config.predictions, "--predictions");
        require_path(config.out, "--out");
        const EvalReport report = evaluate(read_predictions(config.predictions), read_manifest(config.manifest));
        const std::string table = format_report_table(report);
        write_text_file(config.out / "report.txt", table);
        write_text_file(config.out / "report.kv", format_report_kv(report));
        log << table;
        return kExitOk;
    });
}

} // namespace poseaug
