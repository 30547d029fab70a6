#include "poseaug/preprocess/augment.hpp"
#include "poseaug/core/errors.hpp"
#include "poseaug/core/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace poseaug {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
    {
        throw std::invalid_argument("Aug2DConfig: " + what);
    }
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "1")
    {
        return true;
    }
    if (v == "false" || v == "0")
    {
        return false;
    }
    throw FormatError("aug config: bad boolean for " + key + ": '" + v + "'");
}

template <typename T>
T parse_number(const std::string& v, const std::string& key)
{
    std::istringstream in(v);
    T out{};
    if (!(in >> out) || !(in >> std::ws).eof())
    {
        throw FormatError("aug config: bad number for " + key + ": '" + v + "'");
    }
    return out;
}

} // namespace

void Aug2DConfig::validate() const
{
    require(scale_min > 0.0 && scale_min <= scale_max, "scale range");
    require(degrade_min > 0.0 && degrade_min <= degrade_max && degrade_max <= 1.0, "degrade range");
    require(patch_frac_min > 0.0 && patch_frac_min <= patch_frac_max && patch_frac_max <= 1.0, "patch_frac range");
    require(patch_count_min >= 0 && patch_count_min <= patch_count_max, "patch_count range");
    require(roi_size > 0 && crop_size > 0 && crop_size <= roi_size, "crop_size must not exceed roi_size");
    require(flip_prob >= 0.0 && flip_prob <= 1.0, "flip_prob");
}

Aug2DConfig parse_aug2d_config(const std::string& text, Aug2DConfig base)
{
    Aug2DConfig c = base;
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
        {"enable_scale", [&](auto& v, auto& k) { c.enable_scale = parse_bool(v, k); }},
        {"enable_degrade", [&](auto& v, auto& k) { c.enable_degrade = parse_bool(v, k); }},
        {"enable_patches", [&](auto& v, auto& k) { c.enable_patches = parse_bool(v, k); }},
        {"enable_crop", [&](auto& v, auto& k) { c.enable_crop = parse_bool(v, k); }},
        {"enable_flip", [&](auto& v, auto& k) { c.enable_flip = parse_bool(v, k); }},
        {"scale_min", [&](auto& v, auto& k) { c.scale_min = parse_number<double>(v, k); }},
        {"scale_max", [&](auto& v, auto& k) { c.scale_max = parse_number<double>(v, k); }},
        {"degrade_min", [&](auto& v, auto& k) { c.degrade_min = parse_number<double>(v, k); }},
        {"degrade_max", [&](auto& v, auto& k) { c.degrade_max = parse_number<double>(v, k); }},
        {"patch_frac_min", [&](auto& v, auto& k) { c.patch_frac_min = parse_number<double>(v, k); }},
        {"patch_frac_max", [&](auto& v, auto& k) { c.patch_frac_max = parse_number<double>(v, k); }},
        {"patch_count_min", [&](auto& v, auto& k) { c.patch_count_min = parse_number<int>(v, k); }},
        {"patch_count_max", [&](auto& v, auto& k) { c.patch_count_max = parse_number<int>(v, k); }},
        {"roi_size", [&](auto& v, auto& k) { c.roi_size = parse_number<int>(v, k); }},
        {"crop_size", [&](auto& v, auto& k) { c.crop_size = parse_number<int>(v, k); }},
        {"flip_prob", [&](auto& v, auto& k) { c.flip_prob = parse_number<double>(v, k); }},
        {"seed", [&](auto& v, auto& k) { c.seed = parse_number<std::uint64_t>(v, k); }},
    };
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw FormatError("aug config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const auto it = setters.find(key);
        if (it == setters.end())
        {
            throw FormatError("aug config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(trim(line.substr(eq + 1)), key);
    }
    c.validate();
    return c;
}

Aug2DConfig load_aug2d_config(const std::filesystem::path& path, Aug2DConfig base)
{
    std::ifstream in(path);
    if (!in)
    {
        throw FormatError("cannot open aug config " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_aug2d_config(text.str(), base);
}

AugPlan make_video_plan(const Aug2DConfig& config, std::uint64_t video_seed)
{
    config.validate();
    Rng rng(video_seed);
    AugPlan plan;
    plan.roi_size = config.roi_size;
    plan.crop_size = config.crop_size;
    const int slack = config.roi_size - config.crop_size;
    plan.flip = rng.bernoulli(config.flip_prob);
    plan.crop_x = static_cast<int>(rng.uniform_int(0, slack));
    plan.crop_y = static_cast<int>(rng.uniform_int(0, slack));
    plan.scale = rng.uniform(config.scale_min, config.scale_max);
    plan.degrade = rng.uniform(config.degrade_min, config.degrade_max);
    const auto count = rng.uniform_int(config.patch_count_min, config.patch_count_max);
    for (std::int64_t k = 0; k < count; ++k)
    {
        NoisePatch p;
        p.frac_width = rng.uniform(config.patch_frac_min, config.patch_frac_max);
        p.frac_height = rng.uniform(config.patch_frac_min, config.patch_frac_max);
        p.width = std::clamp(static_cast<int>(std::lround(p.frac_width * config.roi_size)), 1, config.roi_size);
        p.height = std::clamp(static_cast<int>(std::lround(p.frac_height * config.roi_size)), 1, config.roi_size);
        p.x = static_cast<int>(rng.uniform_int(0, config.roi_size - p.width));
        p.y = static_cast<int>(rng.uniform_int(0, config.roi_size - p.height));
        p.rgb.resize(static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height) * 3);
        for (auto& v : p.rgb)
        {
            v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
        }
        plan.patches.push_back(std::move(p));
    }

    if (!config.enable_flip)
    {
        plan.flip = false;
    }
    if (!config.enable_crop)
    {
        plan.crop_x = slack / 2;
        plan.crop_y = slack / 2;
    }
    if (!config.enable_scale)
    {
        plan.scale = 1.0;
    }
    if (!config.enable_degrade)
    {
        plan.degrade = 1.0;
    }
    if (!config.enable_patches)
    {
        plan.patches.clear();
    }
    return plan;
}

Image apply_plan(const Image& frame, const AugPlan& plan)
{
    const int roi = plan.roi_size;
    if (frame.width != roi || frame.height != roi)
    {
        throw SizeError("apply_plan: expected " + std::to_string(roi) + "x" + std::to_string(roi) + " input, got " +
                        std::to_string(frame.width) + "x" + std::to_string(frame.height));
    }
    Image img = frame;
    if (plan.scale != 1.0)
    {
        // Output centre c maps to source c + (q - c) / s.
        const double c = 0.5 * roi;
        Eigen::Matrix<double, 2, 3> m;
        m << 1.0 / plan.scale, 0.0, c - c / plan.scale, 0.0, 1.0 / plan.scale, c - c / plan.scale;
        img = warp_affine(img, m, roi, roi);
    }
    if (plan.degrade != 1.0)
    {
        const int small = std::max(1, static_cast<int>(std::lround(plan.degrade * roi)));
        img = resize_bilinear(resize_bilinear(img, small, small), roi, roi);
    }
    for (const auto& p : plan.patches)
    {
        if (p.x < 0 || p.y < 0 || p.x + p.width > roi || p.y + p.height > roi ||
            p.rgb.size() != static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height) * 3)
        {
            throw std::invalid_argument("apply_plan: noise patch outside the ROI");
        }
        for (int y = 0; y < p.height; ++y)
        {
            for (int x = 0; x < p.width; ++x)
            {
                const std::size_t src = (static_cast<std::size_t>(y) * p.width + x) * 3;
                for (int ch = 0; ch < 3; ++ch)
                {
                    img.at(p.x + x, p.y + y, ch) = p.rgb[src + static_cast<std::size_t>(ch)];
                }
            }
        }
    }
    img = crop(img, plan.crop_x, plan.crop_y, plan.crop_size, plan.crop_size);
    if (plan.flip)
    {
        img = flip_horizontal(img);
    }
    return img;
}

} // namespace poseaug
