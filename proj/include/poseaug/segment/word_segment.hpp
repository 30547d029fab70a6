#pragma once

#include "poseaug/dataset/sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace poseaug {

inline constexpr int kClipLength = 29;
inline constexpr int kClipHalf = 14;
inline constexpr int kMinWordFrames = 5;
inline constexpr int kMaxWordFrames = 31;
inline constexpr int kEdgeMargin = 12;
inline constexpr int kTrainCap = 90;
inline constexpr int kValCap = 10;

/// 0-based inclusive frame range of a word within its sentence.
struct WordBoundary
{
    std::string word;
    int start_frame = 0;
    int end_frame = 0;
};

enum class SegmentReason
{
    ok,
    too_short,
    too_long,
    too_early,
    too_late,
};

const char* to_string(SegmentReason reason);

struct SegmentDecision
{
    bool accepted = false;
    SegmentReason reason = SegmentReason::ok;
    int i_mid = 0;
    /// Inclusive clip window; meaningful when accepted.
    int first = 0;
    int last = 0;
};

/**
 * i_mid = floor((start + end) / 2), duration = end - start + 1. Checked in order: duration < 5
 * too_short, duration > 31 too_long, i_mid <= 12 or i_mid < 14 too_early, i_mid >= N - 12 or
 * i_mid + 14 > N - 1 too_late; otherwise the window is [i_mid - 14, i_mid + 14].
 *
 * Throws std::invalid_argument unless 0 <= start <= end < sentence_length.
 */
SegmentDecision decide_segment(const WordBoundary& boundary, int sentence_length);

/// The 29 frames (and landmarks, if any) of an accepted window. Throws std::logic_error otherwise.
SequenceRecord extract_window(const SequenceRecord& sentence, const WordBoundary& boundary,
                              const SegmentDecision& decision, const std::string& clip_id);

struct WordInstance
{
    std::string id;
    std::string word;
};

struct SplitCounts
{
    int train = 0;
    int val = 0;
    int test = 0;

    friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

struct SplitResult
{
    std::map<std::string, std::string> split_of; ///< instance id -> train / val / test
    std::map<std::string, SplitCounts> per_word;
    SplitCounts totals;
    /// (instance id, reason) for instances outside the vocabulary.
    std::vector<std::pair<std::string, std::string>> rejected;
};

/**
 * Per word: sort by id, shuffle with derive_seed(seed, word), take floor(0.8 n) train and
 * floor(0.1 n) val with the rest test, then cap train at 90 and val at 10 with overflow to test.
 * With a vocabulary, instances of other words are rejected rather than split.
 */
SplitResult balance_split(std::vector<WordInstance> instances, std::uint64_t seed,
                          const std::set<std::string>* vocabulary = nullptr);

/// A row of the sentence manifest.
struct SentenceRecord
{
    std::string id;
    std::string path;
    double fps = 25.0;
    int frame_count = 0;
    std::vector<WordBoundary> words;
};

/**
 * Tab-separated: sentence_id, path, fps, N_total, then one WORD:start:end token per word.
 * Bounds are 0-based inclusive frame indices, or seconds when suffixed with 's' (converted with
 * round(t * fps)). Throws FormatError on malformed lines.
 */
std::vector<SentenceRecord> read_sentence_manifest(const std::filesystem::path& path);

/// One word per line, blank lines and '#' comments ignored.
std::set<std::string> read_vocabulary(const std::filesystem::path& path);

} // namespace poseaug
