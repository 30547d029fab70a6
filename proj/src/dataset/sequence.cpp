#include "poseaug/dataset/sequence.hpp"
#include "poseaug/core/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace poseaug {

namespace {

std::string frame_stem(int index)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04d", index);
    return buf;
}

} // namespace

std::filesystem::path frame_image_path(const std::filesystem::path& dir, int index)
{
    return dir / (frame_stem(index) + ".ppm");
}

std::filesystem::path frame_landmark_path(const std::filesystem::path& dir, int index)
{
    return dir / (frame_stem(index) + ".txt");
}

int count_frames(const std::filesystem::path& dir)
{
    int n = 0;
    while (std::filesystem::exists(frame_image_path(dir, n)))
    {
        ++n;
    }
    return n;
}

Points2D read_landmarks(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("missing landmark file " + path.string());
    }
    Points2D pts(2, kNumLandmarks);
    std::string line;
    int k = 0;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        if (k >= kNumLandmarks)
        {
            throw FormatError(path.string() + ": more than 68 landmarks");
        }
        std::istringstream fields(line);
        double x = 0.0;
        double y = 0.0;
        if (!(fields >> x >> y))
        {
            throw FormatError(path.string() + ": bad landmark line " + std::to_string(k + 1));
        }
        pts.col(k++) << x, y;
    }
    if (k != kNumLandmarks)
    {
        throw FormatError(path.string() + ": expected 68 landmarks, got " + std::to_string(k));
    }
    return pts;
}

void write_landmarks(const Points2D& landmarks, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw FormatError("cannot write " + path.string());
    }
    char buf[64];
    for (Eigen::Index k = 0; k < landmarks.cols(); ++k)
    {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f\n", landmarks(0, k), landmarks(1, k));
        out << buf;
    }
}

std::vector<Points2D> load_video_landmarks(const std::filesystem::path& dir)
{
    const int n = count_frames(dir);
    if (n == 0)
    {
        throw FormatError("no frames in " + dir.string());
    }
    std::vector<Points2D> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        out.push_back(read_landmarks(frame_landmark_path(dir, i)));
    }
    return out;
}

SequenceRecord load_video(const std::filesystem::path& dir, bool require_landmarks)
{
    const int n = count_frames(dir);
    if (n == 0)
    {
        throw FormatError("no frames in " + dir.string());
    }
    SequenceRecord video;
    video.id = dir.filename().string();
    bool have_landmarks = true;
    for (int i = 0; i < n && have_landmarks; ++i)
    {
        have_landmarks = std::filesystem::exists(frame_landmark_path(dir, i));
    }
    for (int i = 0; i < n; ++i)
    {
        video.frames.push_back(read_ppm(frame_image_path(dir, i)));
        if (have_landmarks || require_landmarks)
        {
            video.landmarks.push_back(read_landmarks(frame_landmark_path(dir, i)));
        }
    }
    return video;
}

void save_video(const SequenceRecord& video, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (int i = count_frames(dir) - 1; i >= 0; --i)
    {
        std::filesystem::remove(frame_image_path(dir, i));
        std::filesystem::remove(frame_landmark_path(dir, i));
    }
    for (int i = 0; i < video.frame_count(); ++i)
    {
        write_ppm(video.frames[static_cast<std::size_t>(i)], frame_image_path(dir, i));
        if (!video.landmarks.empty())
        {
            write_landmarks(video.landmarks[static_cast<std::size_t>(i)], frame_landmark_path(dir, i));
        }
    }
}

} // namespace poseaug
