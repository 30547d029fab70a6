#include "poseaug/segment/word_segment.hpp"
#include "poseaug/core/errors.hpp"
#include "poseaug/core/random.hpp"
#include "poseaug/dataset/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace poseaug {

const char* to_string(SegmentReason reason)
{
    switch (reason)
    {
    case SegmentReason::ok:
        return "ok";
    case SegmentReason::too_short:
        return "too_short";
    case SegmentReason::too_long:
        return "too_long";
    case SegmentReason::too_early:
        return "too_early";
    case SegmentReason::too_late:
        return "too_late";
    }
    return "unknown";
}

SegmentDecision decide_segment(const WordBoundary& boundary, int sentence_length)
{
    if (boundary.start_frame < 0 || boundary.start_frame > boundary.end_frame ||
        boundary.end_frame >= sentence_length)
    {
        throw std::invalid_argument("decide_segment: boundary [" + std::to_string(boundary.start_frame) + ", " +
                                    std::to_string(boundary.end_frame) + "] outside sentence of " +
                                    std::to_string(sentence_length) + " frames");
    }
    SegmentDecision d;
    d.i_mid = (boundary.start_frame + boundary.end_frame) / 2;
    const int duration = boundary.end_frame - boundary.start_frame + 1;
    if (duration < kMinWordFrames)
    {
        d.reason = SegmentReason::too_short;
    }
    else if (duration > kMaxWordFrames)
    {
        d.reason = SegmentReason::too_long;
    }
    else if (d.i_mid <= kEdgeMargin || d.i_mid - kClipHalf < 0)
    {
        d.reason = SegmentReason::too_early;
    }
    else if (d.i_mid >= sentence_length - kEdgeMargin || d.i_mid + kClipHalf > sentence_length - 1)
    {
        d.reason = SegmentReason::too_late;
    }
    else
    {
        d.accepted = true;
        d.first = d.i_mid - kClipHalf;
        d.last = d.i_mid + kClipHalf;
    }
    return d;
}

SequenceRecord extract_window(const SequenceRecord& sentence, const WordBoundary& boundary,
                              const SegmentDecision& decision, const std::string& clip_id)
{
    if (!decision.accepted)
    {
        throw std::logic_error(std::string("extract_window: decision not accepted (") + to_string(decision.reason) +
                               ")");
    }
    if (decision.first < 0 || decision.last >= sentence.frame_count() || decision.last - decision.first + 1 != kClipLength)
    {
        throw std::logic_error("extract_window: window does not fit the sentence");
    }
    SequenceRecord clip;
    clip.id = clip_id;
    clip.word = boundary.word;
    clip.source_id = sentence.id;
    clip.source_mid_frame = decision.i_mid;
    for (int i = decision.first; i <= decision.last; ++i)
    {
        clip.frames.push_back(sentence.frames[static_cast<std::size_t>(i)]);
        if (!sentence.landmarks.empty())
        {
            clip.landmarks.push_back(sentence.landmarks[static_cast<std::size_t>(i)]);
        }
    }
    return clip;
}

SplitResult balance_split(std::vector<WordInstance> instances, std::uint64_t seed,
                          const std::set<std::string>* vocabulary)
{
    std::sort(instances.begin(), instances.end(), [](const WordInstance& a, const WordInstance& b) {
        return a.id < b.id || (a.id == b.id && a.word < b.word);
    });
    for (std::size_t i = 1; i < instances.size(); ++i)
    {
        if (instances[i].id == instances[i - 1].id)
        {
            throw std::invalid_argument("balance_split: duplicate instance id " + instances[i].id);
        }
    }
    SplitResult result;
    std::map<std::string, std::vector<std::string>> by_word;
    for (const auto& inst : instances)
    {
        if (vocabulary != nullptr && !vocabulary->count(inst.word))
        {
            result.rejected.emplace_back(inst.id, "unknown_word");
            continue;
        }
        by_word[inst.word].push_back(inst.id);
    }
    for (auto& [word, ids] : by_word)
    {
        Rng rng(derive_seed(seed, word));
        for (std::size_t i = ids.size(); i > 1; --i)
        {
            std::swap(ids[i - 1], ids[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
        }
        const int n = static_cast<int>(ids.size());
        const int train_share = n * 8 / 10;
        const int val_share = n / 10;
        SplitCounts c;
        c.train = std::min(train_share, kTrainCap);
        c.val = std::min(val_share, kValCap);
        c.test = n - c.train - c.val;
        // Train first, then val, then everything else (including cap overflow) to test.
        for (int i = 0; i < n; ++i)
        {
            const char* split = i < c.train ? "train" : (i < train_share + c.val && i >= train_share ? "val" : "test");
            result.split_of[ids[static_cast<std::size_t>(i)]] = split;
        }
        result.per_word[word] = c;
        result.totals.train += c.train;
        result.totals.val += c.val;
        result.totals.test += c.test;
    }
    return result;
}

namespace {

int parse_bound(const std::string& token, double fps, const std::string& where)
{
    try
    {
        std::size_t used = 0;
        if (!token.empty() && token.back() == 's')
        {
            const double seconds = std::stod(token.substr(0, token.size() - 1), &used);
            if (used == token.size() - 1)
            {
                return static_cast<int>(std::lround(seconds * fps));
            }
        }
        else
        {
            const int frame = std::stoi(token, &used);
            if (used == token.size())
            {
                return frame;
            }
        }
    }
    catch (const std::exception&)
    {
    }
    throw FormatError(where + ": bad word bound '" + token + "'");
}

} // namespace

std::vector<SentenceRecord> read_sentence_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open sentence manifest " + path.string());
    }
    std::vector<SentenceRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        const std::string where = "sentence manifest line " + std::to_string(line_no);
        const auto f = split_tabs(line);
        if (f.size() < 4)
        {
            throw FormatError(where + ": expected at least 4 fields");
        }
        SentenceRecord s;
        s.id = f[0];
        s.path = f[1];
        try
        {
            s.fps = std::stod(f[2]);
            s.frame_count = std::stoi(f[3]);
        }
        catch (const std::exception&)
        {
            throw FormatError(where + ": bad fps or frame count");
        }
        if (!(s.fps > 0.0) || s.frame_count <= 0)
        {
            throw FormatError(where + ": fps and frame count must be positive");
        }
        for (std::size_t k = 4; k < f.size(); ++k)
        {
            const auto c1 = f[k].find(':');
            const auto c2 = c1 == std::string::npos ? std::string::npos : f[k].find(':', c1 + 1);
            if (c2 == std::string::npos || c1 == 0)
            {
                throw FormatError(where + ": bad word token '" + f[k] + "'");
            }
            WordBoundary b;
            b.word = f[k].substr(0, c1);
            b.start_frame = parse_bound(f[k].substr(c1 + 1, c2 - c1 - 1), s.fps, where);
            b.end_frame = parse_bound(f[k].substr(c2 + 1), s.fps, where);
            s.words.push_back(std::move(b));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::set<std::string> read_vocabulary(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open vocabulary " + path.string());
    }
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line))
    {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        {
            line.pop_back();
        }
        if (!line.empty() && line[0] != '#')
        {
            words.insert(line);
        }
    }
    return words;
}

} // namespace poseaug
