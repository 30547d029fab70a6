#include "poseaug/eval/pose_eval.hpp"
#include "poseaug/core/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace poseaug {

namespace {

PoseBinTable empty_table(PoseAxis axis)
{
    PoseBinTable t;
    t.axis = axis;
    for (int b = 0; b < kNumPoseBins; ++b)
    {
        t.bins[static_cast<std::size_t>(b)].lo = kPoseBinEdges[static_cast<std::size_t>(b)];
        t.bins[static_cast<std::size_t>(b)].hi = kPoseBinEdges[static_cast<std::size_t>(b) + 1];
    }
    return t;
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

const char* axis_name(PoseAxis axis)
{
    return axis == PoseAxis::yaw ? "yaw" : "pitch";
}

} // namespace

SequencePose sequence_pose(const std::vector<PoseAngles>& per_frame)
{
    if (per_frame.empty())
    {
        throw std::invalid_argument("sequence_pose: no frames");
    }
    SequencePose out;
    for (const auto& a : per_frame)
    {
        out.mean_abs_yaw += std::abs(a.yaw);
        out.mean_abs_pitch += std::abs(a.pitch);
    }
    out.mean_abs_yaw /= static_cast<double>(per_frame.size());
    out.mean_abs_pitch /= static_cast<double>(per_frame.size());
    return out;
}

int pose_bin(double angle_abs)
{
    if (!(angle_abs >= 0.0))
    {
        throw std::invalid_argument("pose_bin: angle must be non-negative, got " + std::to_string(angle_abs));
    }
    for (int b = 0; b < kNumPoseBins - 1; ++b)
    {
        if (angle_abs < kPoseBinEdges[static_cast<std::size_t>(b) + 1])
        {
            return b;
        }
    }
    return kNumPoseBins - 1;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open predictions " + path.string());
    }
    std::vector<PredictionRecord> out;
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
        const auto f = split_tabs(line);
        if (f.size() != 3)
        {
            throw FormatError("predictions line " + std::to_string(line_no) + ": expected 3 fields");
        }
        out.push_back({f[0], f[1], f[2]});
    }
    return out;
}

std::optional<double> PoseBin::accuracy() const
{
    if (count == 0)
    {
        return std::nullopt;
    }
    return 100.0 * correct / count;
}

EvalReport evaluate(const std::vector<PredictionRecord>& predictions, const std::vector<ManifestEntry>& manifest)
{
    if (predictions.empty())
    {
        throw std::invalid_argument("evaluate: no predictions");
    }
    std::map<std::string, const ManifestEntry*> by_id;
    for (const auto& e : manifest)
    {
        by_id[e.entry_id] = &e;
    }
    std::set<std::string> seen;
    std::vector<std::string> unknown;
    for (const auto& p : predictions)
    {
        if (!seen.insert(p.entry_id).second)
        {
            throw std::invalid_argument("evaluate: duplicate prediction for " + p.entry_id);
        }
        if (!by_id.count(p.entry_id))
        {
            unknown.push_back(p.entry_id);
        }
    }
    if (!unknown.empty())
    {
        std::string list;
        for (const auto& id : unknown)
        {
            list += (list.empty() ? "" : ",") + id;
        }
        throw std::invalid_argument("evaluate: unknown entry ids: " + list);
    }

    EvalReport report;
    report.yaw = empty_table(PoseAxis::yaw);
    report.pitch = empty_table(PoseAxis::pitch);
    for (const auto& p : predictions)
    {
        const ManifestEntry& e = *by_id.at(p.entry_id);
        if (!e.mean_abs_yaw || !e.mean_abs_pitch)
        {
            throw std::invalid_argument("evaluate: manifest entry " + e.entry_id + " has no pose columns");
        }
        const int hit = p.predicted_label == p.true_label ? 1 : 0;
        ++report.total;
        report.correct += hit;
        auto& yb = report.yaw.bins[static_cast<std::size_t>(pose_bin(*e.mean_abs_yaw))];
        auto& pb = report.pitch.bins[static_cast<std::size_t>(pose_bin(*e.mean_abs_pitch))];
        ++yb.count;
        yb.correct += hit;
        ++pb.count;
        pb.correct += hit;
    }
    report.accuracy = 100.0 * report.correct / report.total;
    return report;
}

std::string format_report_table(const EvalReport& report)
{
    std::ostringstream out;
    out << "overall accuracy: " << fixed(report.accuracy, 2) << "% (" << report.correct << "/" << report.total
        << ")\n\n";
    char cell[64];
    std::snprintf(cell, sizeof(cell), "%-8s", "axis");
    out << cell;
    for (const auto& bin : report.yaw.bins)
    {
        const std::string range = fixed(bin.lo, 0) + "-" + fixed(bin.hi, 0);
        std::snprintf(cell, sizeof(cell), "%16s", range.c_str());
        out << cell;
    }
    out << '\n';
    for (const PoseBinTable* table : {&report.yaw, &report.pitch})
    {
        std::snprintf(cell, sizeof(cell), "%-8s", axis_name(table->axis));
        out << cell;
        for (const auto& bin : table->bins)
        {
            const auto acc = bin.accuracy();
            const std::string text =
                acc ? fixed(*acc, 2) + " (" + std::to_string(bin.correct) + "/" + std::to_string(bin.count) + ")" : "-";
            std::snprintf(cell, sizeof(cell), "%16s", text.c_str());
            out << cell;
        }
        out << '\n';
    }
    return out.str();
}

std::string format_report_kv(const EvalReport& report)
{
    std::ostringstream out;
    out << "total=" << report.total << '\n';
    out << "correct=" << report.correct << '\n';
    out << "accuracy=" << fixed(report.accuracy, 6) << '\n';
    for (const PoseBinTable* table : {&report.yaw, &report.pitch})
    {
        for (int b = 0; b < kNumPoseBins; ++b)
        {
            const auto& bin = table->bins[static_cast<std::size_t>(b)];
            const std::string prefix = std::string(axis_name(table->axis)) + ".bin" + std::to_string(b) + ".";
            out << prefix << "range=" << fixed(bin.lo, 0) << "-" << fixed(bin.hi, 0) << '\n';
            out << prefix << "count=" << bin.count << '\n';
            out << prefix << "correct=" << bin.correct << '\n';
            const auto acc = bin.accuracy();
            out << prefix << "accuracy=" << (acc ? fixed(*acc, 6) : "-") << '\n';
        }
    }
    return out.str();
}

} // namespace poseaug
