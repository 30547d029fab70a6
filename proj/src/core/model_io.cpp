#include "poseaug/core/model_io.hpp"
#include "poseaug/core/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

namespace poseaug {

namespace {

constexpr std::string_view kMagic{"PW3DMM\0", 7};

class Writer
{
public:
    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
        {
            bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
        }
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void raw(std::string_view s) { bytes_.append(s); }
    const std::string& bytes() const { return bytes_; }

private:
    std::string bytes_;
};

class Reader
{
public:
    explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

    std::uint32_t u32(const char* field)
    {
        need(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
        {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    float f32(const char* field) { return std::bit_cast<float>(u32(field)); }

    void need(std::size_t count, const char* field) const
    {
        if (bytes_.size() - pos_ < count)
        {
            throw FormatError(std::string("model file truncated in field '") + field + "'");
        }
    }
    std::string_view take(std::size_t count, const char* field)
    {
        need(count, field);
        auto out = std::string_view(bytes_).substr(pos_, count);
        pos_ += count;
        return out;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::string bytes_;
    std::size_t pos_ = 0;
};

void read_floats(Reader& in, float* dst, std::size_t count, const char* field)
{
    in.need(count * 4, field);
    for (std::size_t i = 0; i < count; ++i)
    {
        dst[i] = in.f32(field);
    }
}

} // namespace

void save_model(const MorphableModel& model, const std::filesystem::path& path)
{
    model.validate();

    Writer out;
    out.raw(kMagic);
    out.u32(kModelFormatVersion);
    out.u32(static_cast<std::uint32_t>(model.num_vertices()));
    out.u32(static_cast<std::uint32_t>(model.num_id()));
    out.u32(static_cast<std::uint32_t>(model.num_exp()));
    out.u32(static_cast<std::uint32_t>(model.landmark_indices.size()));
    out.u32(static_cast<std::uint32_t>(model.triangles.size()));
    out.u32((model.id_scales ? 1u : 0u) | (model.exp_scales ? 2u : 0u));
    for (Eigen::Index i = 0; i < model.mean_shape.size(); ++i)
    {
        out.f32(model.mean_shape[i]);
    }
    for (const Eigen::MatrixXf* basis : {&model.id_basis, &model.exp_basis})
    {
        // Eigen's default storage is column-major, matching the container.
        for (Eigen::Index i = 0; i < basis->size(); ++i)
        {
            out.f32(basis->data()[i]);
        }
    }
    for (auto idx : model.landmark_indices)
    {
        out.u32(idx);
    }
    for (const auto& tri : model.triangles)
    {
        for (auto idx : tri)
        {
            out.u32(idx);
        }
    }
    if (model.id_scales)
    {
        for (float s : *model.id_scales)
        {
            out.f32(s);
        }
    }
    if (model.exp_scales)
    {
        for (float s : *model.exp_scales)
        {
            out.f32(s);
        }
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
    {
        throw std::runtime_error("save_model: cannot open " + path.string() + " for writing");
    }
    file.write(out.bytes().data(), static_cast<std::streamsize>(out.bytes().size()));
    if (!file)
    {
        throw std::runtime_error("save_model: write failed for " + path.string());
    }
}

MorphableModel load_model(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file)
    {
        throw std::runtime_error("load_model: cannot open " + path.string());
    }
    Reader in(std::string(std::istreambuf_iterator<char>(file), {}));

    if (in.take(kMagic.size(), "magic") != kMagic)
    {
        throw FormatError("model file has bad magic (field 'magic')");
    }
    const auto version = in.u32("version");
    if (version != kModelFormatVersion)
    {
        throw FormatError("unsupported model version " + std::to_string(version) +
                          " (field 'version')");
    }
    const auto n = in.u32("n_vertices");
    const auto k_id = in.u32("k_id");
    const auto k_exp = in.u32("k_exp");
    const auto n_landmarks = in.u32("n_landmarks");
    const auto n_triangles = in.u32("n_triangles");
    const auto flags = in.u32("flags");
    if (n == 0)
    {
        throw FormatError("model header has zero vertices (field 'n_vertices')");
    }
    if (n_landmarks != kNumLandmarks)
    {
        throw FormatError("model header declares " + std::to_string(n_landmarks) +
                          " landmarks, expected 68 (field 'n_landmarks')");
    }
    if (flags > 3u)
    {
        throw FormatError("unknown flag bits (field 'flags')");
    }

    // Check the payload length against the header before allocating anything large.
    const std::uint64_t rows = 3ull * n;
    const std::uint64_t expected = 4ull * (rows + rows * k_id + rows * k_exp + n_landmarks +
                                           3ull * n_triangles + ((flags & 1u) ? k_id : 0u) +
                                           ((flags & 2u) ? k_exp : 0u));
    if (in.remaining() < expected)
    {
        // Walk the sections to name the first one that runs short.
        std::uint64_t acc = 0;
        const std::pair<const char*, std::uint64_t> sections[] = {
            {"mean_shape", rows},
            {"id_basis", rows * k_id},
            {"exp_basis", rows * k_exp},
            {"landmark_indices", n_landmarks},
            {"triangles", 3ull * n_triangles},
            {"id_scales", (flags & 1u) ? k_id : 0u},
            {"exp_scales", (flags & 2u) ? k_exp : 0u},
        };
        for (const auto& [name, count] : sections)
        {
            acc += 4ull * count;
            if (acc > in.remaining())
            {
                throw FormatError(std::string("model file truncated in field '") + name +
                                  "' (header dimensions inconsistent with payload)");
            }
        }
    }
    if (in.remaining() > expected)
    {
        throw FormatError("model file has trailing bytes after field 'exp_scales'");
    }

    MorphableModel model;
    model.mean_shape.resize(static_cast<Eigen::Index>(rows));
    read_floats(in, model.mean_shape.data(), rows, "mean_shape");
    model.id_basis.resize(static_cast<Eigen::Index>(rows), k_id);
    read_floats(in, model.id_basis.data(), rows * k_id, "id_basis");
    model.exp_basis.resize(static_cast<Eigen::Index>(rows), k_exp);
    read_floats(in, model.exp_basis.data(), rows * k_exp, "exp_basis");
    model.landmark_indices.resize(n_landmarks);
    for (auto& idx : model.landmark_indices)
    {
        idx = in.u32("landmark_indices");
        if (idx >= n)
        {
            throw FormatError("landmark index " + std::to_string(idx) +
                              " out of range (field 'landmark_indices')");
        }
    }
    model.triangles.resize(n_triangles);
    for (auto& tri : model.triangles)
    {
        for (auto& idx : tri)
        {
            idx = in.u32("triangles");
            if (idx >= n)
            {
                throw FormatError("triangle index " + std::to_string(idx) +
                                  " out of range (field 'triangles')");
            }
        }
    }
    if (flags & 1u)
    {
        model.id_scales = Eigen::VectorXf(k_id);
        read_floats(in, model.id_scales->data(), k_id, "id_scales");
    }
    if (flags & 2u)
    {
        model.exp_scales = Eigen::VectorXf(k_exp);
        read_floats(in, model.exp_scales->data(), k_exp, "exp_scales");
    }
    return model;
}

} // namespace poseaug
