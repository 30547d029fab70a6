#pragma once

#include "poseaug/dataset/sequence.hpp"
#include "poseaug/preprocess/align.hpp"
#include "poseaug/preprocess/augment.hpp"

namespace poseaug {

struct PreprocessedVideo
{
    std::vector<Image> mouth_frames; ///< crop_size x crop_size
    AugPlan plan;                    ///< the single plan applied to every frame
};

/// align_face -> crop_mouth -> apply_plan on every frame with one plan drawn from video_seed.
PreprocessedVideo preprocess_video(const SequenceRecord& video, const Aug2DConfig& config, std::uint64_t video_seed,
                                   const AlignmentReference& reference = {});

} // namespace poseaug
