#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace poseaug {

/**
 * One manifest row. Columns, tab-separated, in this order:
 *
 *   entry_id  source_id  path  word  split  frame_count  mean_abs_yaw  mean_abs_pitch
 *   delta_yaw  delta_pitch  seed
 *
 * Missing values are written as "-". Lines starting with '#' are comments. Paths are relative
 * to the directory holding the manifest.
 */
struct ManifestEntry
{
    std::string entry_id;
    std::optional<std::string> source_id;
    std::string path;
    std::string word;
    std::string split;
    int frame_count = 0;
    std::optional<double> mean_abs_yaw;
    std::optional<double> mean_abs_pitch;
    std::optional<double> delta_yaw;
    std::optional<double> delta_pitch;
    std::optional<std::uint64_t> seed;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr const char* kManifestHeader =
    "# entry_id\tsource_id\tpath\tword\tsplit\tframe_count\tmean_abs_yaw\tmean_abs_pitch\tdelta_yaw\tdelta_pitch\tseed";

/// Throws FormatError with the line number on malformed rows or duplicate ids.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

/// Writes entries in the given order; reals with six decimals.
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

std::string format_manifest(const std::vector<ManifestEntry>& entries);

void sort_by_id(std::vector<ManifestEntry>& entries);

/// Location of entry.path for a manifest stored at manifest_path.
std::filesystem::path resolve_entry_path(const std::filesystem::path& manifest_path, const ManifestEntry& entry);

/// Splits a line on tabs, keeping empty fields.
std::vector<std::string> split_tabs(const std::string& line);

/// Writes text to path atomically enough for our purposes (temp file then rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace poseaug
