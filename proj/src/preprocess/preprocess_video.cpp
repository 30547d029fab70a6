#include "poseaug/preprocess/preprocess_video.hpp"

#include <stdexcept>

namespace poseaug {

PreprocessedVideo preprocess_video(const SequenceRecord& video, const Aug2DConfig& config, std::uint64_t video_seed,
                                   const AlignmentReference& reference)
{
    if (video.landmarks.size() != video.frames.size())
    {
        throw std::invalid_argument("preprocess_video: every frame needs landmarks");
    }
    PreprocessedVideo out;
    out.plan = make_video_plan(config, video_seed);
    for (std::size_t i = 0; i < video.frames.size(); ++i)
    {
        const AlignedFrame aligned = align_face(video.frames[i], video.landmarks[i], reference);
        const Image roi = crop_mouth(aligned.image, mouth_landmarks(aligned.landmarks));
        out.mouth_frames.push_back(apply_plan(roi, out.plan));
    }
    return out;
}

} // namespace poseaug
