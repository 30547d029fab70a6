#include "corpus.hpp"
#include "synthetic.hpp"

#include "poseaug/core/model_io.hpp"
#include "poseaug/dataset/manifest.hpp"
#include "poseaug/dataset/sequence.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace poseaug::testing {

namespace {

const std::array<const char*, 4> kWords{"ABOUT", "BELIEVE", "CHANGE", "DURING"};

std::string numbered(const char* prefix, int i)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
    return buf;
}

} // namespace

TempDir::TempDir(const std::string& name)
{
    path_ = std::filesystem::temp_directory_path() / ("poseaug_" + name);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir()
{
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_face_corpus(const std::filesystem::path& dir, const MorphableModel& model, const FaceCorpusOptions& options)
{
    std::filesystem::create_directories(dir);
    save_model(model, dir / "model.bin");
    Rng rng(options.seed);
    std::vector<ManifestEntry> entries;
    for (int v = 0; v < options.videos; ++v)
    {
        const std::string id = numbered("vid", v);
        FaceScene scene = make_face_scene(model, rng, options.image_size);
        const PoseAngles base = euler_from_rotation(scene.params.rotation);
        SequenceRecord video;
        video.id = id;
        for (int f = 0; f < options.frames; ++f)
        {
            FitParams p = scene.params;
            p.rotation = rotation_from_euler({base.yaw + 1.5 * f, base.pitch - 0.5 * f, base.roll});
            video.frames.push_back(scene.image);
            video.landmarks.push_back(synth_landmarks(model, p));
        }
        save_video(video, dir / "videos" / id);
        ManifestEntry e;
        e.entry_id = id;
        e.path = "videos/" + id;
        e.word = kWords[static_cast<std::size_t>(v) % kWords.size()];
        e.split = "train";
        e.frame_count = options.frames;
        entries.push_back(e);
    }
    write_manifest(entries, dir / "manifest.tsv");
}

void write_sentence_corpus(const std::filesystem::path& dir, int sentences, std::uint64_t seed)
{
    Rng rng(seed);
    const int n_total = 60;
    std::ostringstream manifest;
    manifest << "# sentence_id\tpath\tfps\tN_total\twords...\n";
    for (int s = 0; s < sentences; ++s)
    {
        const std::string id = numbered("s", s);
        SequenceRecord video;
        for (int f = 0; f < n_total; ++f)
        {
            video.frames.push_back(make_texture(16, 16, rng));
        }
        save_video(video, dir / "sentences" / id);
        manifest << id << "\tsentences/" << id << "\t25\t" << n_total;
        // Accepted: mid 20 and 35; too early: mid 10; too short; too late; seconds form; out of vocabulary.
        manifest << "\tABOUT:16:24\tCHANGE:31:39\tBELIEVE:7:13\tDURING:40:42\tABOUT:44:52\tCHANGE:0.72s:0.92s";
        manifest << "\tZEBRA:25:33\n";
    }
    std::ofstream(dir / "sentences.tsv") << manifest.str();
    std::ofstream(dir / "vocab.txt") << "ABOUT\nBELIEVE\nCHANGE\nDURING\n";
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace poseaug::testing
