#include "poseaug/dataset/manifest.hpp"
#include "poseaug/core/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace poseaug {

namespace {

constexpr std::size_t kColumns = 11;

std::string format_real(const std::optional<double>& v)
{
    if (!v)
    {
        return "-";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

std::optional<double> parse_real(const std::string& field, const char* name, int line)
{
    if (field == "-")
    {
        return std::nullopt;
    }
    try
    {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used == field.size())
        {
            return v;
        }
    }
    catch (const std::exception&)
    {
    }
    throw FormatError("manifest line " + std::to_string(line) + ": bad " + name + " '" + field + "'");
}

} // namespace

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos)
        {
            break;
        }
        start = tab + 1;
    }
    return fields;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open manifest " + path.string());
    }
    std::vector<ManifestEntry> entries;
    std::set<std::string> seen;
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
        if (f.size() != kColumns)
        {
            throw FormatError("manifest line " + std::to_string(line_no) + ": expected " + std::to_string(kColumns) +
                              " fields, got " + std::to_string(f.size()));
        }
        ManifestEntry e;
        e.entry_id = f[0];
        if (e.entry_id.empty() || e.entry_id == "-")
        {
            throw FormatError("manifest line " + std::to_string(line_no) + ": empty entry_id");
        }
        if (!seen.insert(e.entry_id).second)
        {
            throw FormatError("manifest line " + std::to_string(line_no) + ": duplicate entry_id " + e.entry_id);
        }
        if (f[1] != "-")
        {
            e.source_id = f[1];
        }
        e.path = f[2];
        e.word = f[3];
        e.split = f[4];
        const auto frames = parse_real(f[5], "frame_count", line_no);
        e.frame_count = frames ? static_cast<int>(*frames) : 0;
        e.mean_abs_yaw = parse_real(f[6], "mean_abs_yaw", line_no);
        e.mean_abs_pitch = parse_real(f[7], "mean_abs_pitch", line_no);
        e.delta_yaw = parse_real(f[8], "delta_yaw", line_no);
        e.delta_pitch = parse_real(f[9], "delta_pitch", line_no);
        if (f[10] != "-")
        {
            try
            {
                std::size_t used = 0;
                e.seed = std::stoull(f[10], &used);
                if (used != f[10].size())
                {
                    throw std::invalid_argument("trailing");
                }
            }
            catch (const std::exception&)
            {
                throw FormatError("manifest line " + std::to_string(line_no) + ": bad seed '" + f[10] + "'");
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::string format_manifest(const std::vector<ManifestEntry>& entries)
{
    std::ostringstream out;
    out << kManifestHeader << '\n';
    for (const auto& e : entries)
    {
        out << e.entry_id << '\t' << e.source_id.value_or("-") << '\t' << e.path << '\t' << e.word << '\t'
            << e.split << '\t' << e.frame_count << '\t' << format_real(e.mean_abs_yaw) << '\t'
            << format_real(e.mean_abs_pitch) << '\t' << format_real(e.delta_yaw) << '\t'
            << format_real(e.delta_pitch) << '\t' << (e.seed ? std::to_string(*e.seed) : "-") << '\n';
    }
    return out.str();
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path)
{
    write_text_file(path, format_manifest(entries));
}

void sort_by_id(std::vector<ManifestEntry>& entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.entry_id < b.entry_id; });
}

std::filesystem::path resolve_entry_path(const std::filesystem::path& manifest_path, const ManifestEntry& entry)
{
    const std::filesystem::path p(entry.path);
    return p.is_absolute() ? p : manifest_path.parent_path() / p;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
    {
        std::filesystem::create_directories(path.parent_path());
    }
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
        {
            throw FormatError("cannot write " + path.string());
        }
        out << text;
        if (!out)
        {
            throw FormatError("write failed for " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace poseaug
