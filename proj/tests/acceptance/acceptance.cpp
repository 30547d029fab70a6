// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "poseaug/core/morphable_model.hpp"
#include "poseaug/core/random.hpp"
#include "poseaug/dataset/manifest.hpp"
#include "poseaug/eval/pose_eval.hpp"
#include "poseaug/fitting/fitting.hpp"
#include "poseaug/lp/lp_builder.hpp"
#include "poseaug/render/rasterizer.hpp"
#include "poseaug/render/render_pose.hpp"
#include "poseaug/render/scene.hpp"
#include "poseaug/segment/word_segment.hpp"

#include "corpus.hpp"
#include "synthetic.hpp"
#include "warp_oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace poseaug;
namespace fs = std::filesystem;
using poseaug::testing::slurp;
using poseaug::testing::TempDir;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double angle_diff(double a, double b)
{
    return std::abs(std::remainder(a - b, 360.0));
}

Outcome fit_round_trip()
{
    const auto model = poseaug::testing::make_synthetic_model(500, 10, 10, 101);
    Rng rng(102);
    std::vector<FitParams> truth;
    std::vector<Points2D> landmarks;
    for (int i = 0; i < 100; ++i)
    {
        truth.push_back(poseaug::testing::random_params(model, rng));
        landmarks.push_back(poseaug::testing::synth_landmarks(model, truth.back()));
    }
    FitConfig config;
    config.reg_id = 1e-8;
    config.reg_exp = 1e-8;
    config.max_alternations = 50;
    config.convergence_tol = 1e-9;

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<FitResult> fits;
    for (const auto& y : landmarks)
    {
        fits.push_back(fit_frame(model, y, config));
    }
    const double elapsed = seconds_since(t0);

    double worst_rmse = 0.0;
    double worst_angle = 0.0;
    for (std::size_t i = 0; i < fits.size(); ++i)
    {
        worst_rmse = std::max(worst_rmse, fits[i].reprojection_rmse);
        const PoseAngles a = euler_from_rotation(truth[i].rotation);
        const PoseAngles b = euler_from_rotation(fits[i].params.rotation);
        worst_angle = std::max({worst_angle, angle_diff(a.yaw, b.yaw), angle_diff(a.pitch, b.pitch),
                                angle_diff(a.roll, b.roll)});
    }
    return {worst_rmse < 1e-3 && worst_angle < 1e-4 && elapsed < 10.0,
            fmt("max rmse %.3g px, max angle error %.3g deg, %.2f s", worst_rmse, worst_angle, elapsed)};
}

double fraction_within(const Image& a, const Image& b, int tol)
{
    if (a.width != b.width || a.height != b.height)
    {
        return 0.0;
    }
    const int pixels = a.width * a.height;
    int ok = 0;
    for (int i = 0; i < pixels; ++i)
    {
        bool good = true;
        for (int c = 0; c < 3; ++c)
        {
            good = good && std::abs(a.data[3 * i + c] - b.data[3 * i + c]) <= tol;
        }
        ok += good ? 1 : 0;
    }
    return static_cast<double>(ok) / pixels;
}

Outcome identity_render()
{
    const auto model = poseaug::testing::make_synthetic_model(500, 10, 10, 201);
    Rng rng(202);
    double worst = 1.0;
    for (int i = 0; i < 10; ++i)
    {
        const auto scene = poseaug::testing::make_face_scene(model, rng);
        const auto out = render_new_pose(scene.image, model, scene.params, {0.0, 0.0});
        worst = std::min(worst, fraction_within(out.image, scene.image, 1));
    }
    return {worst >= 0.99, fmt("worst scene %.4f of pixels within +-1", worst)};
}

Outcome rotated_quad_oracle()
{
    Rng rng(301);
    const Image tex = poseaug::testing::make_texture(256, 256, rng);
    const poseaug::testing::PlanarQuad quad{40, 30, 220, 200, 10};
    SceneMesh mesh;
    mesh.vertices.resize(3, 4);
    mesh.vertices << quad.x0, quad.x1, quad.x1, quad.x0, quad.y0, quad.y0, quad.y1, quad.y1, quad.z, quad.z, quad.z,
        quad.z;
    mesh.uv = mesh.vertices.topRows<2>();
    mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
    mesh.face_vertex_mask.assign(4, false);
    const Eigen::Vector3d pivot(128, 115, -30);
    const Image out = rasterize(rotate_scene(mesh, 20.0, 0.0, pivot), tex, 256, 256);
    const auto oracle = poseaug::testing::inverse_warp_oracle(tex, quad, rotation_from_euler({20, 0, 0}), pivot);
    int covered = 0;
    const double mad = poseaug::testing::mean_abs_difference(out, oracle, &covered);
    return {mad <= 2.0 && covered > 0, fmt("MAD %.3f over %.0f covered pixels", mad, static_cast<double>(covered))};
}

Outcome pose_self_consistency()
{
    const auto model = poseaug::testing::make_synthetic_model(500, 10, 10, 401);
    Rng rng(402);
    const FitConfig config;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
    {
        const auto scene = poseaug::testing::make_face_scene(model, rng);
        const auto fit = fit_frame(model, poseaug::testing::synth_landmarks(model, scene.params), config);
        const auto out = render_new_pose(scene.image, model, fit.params, {30.0, 0.0});
        const auto refit = fit_frame(model, out.landmarks, config);
        const double shift =
            euler_from_rotation(refit.params.rotation).yaw - euler_from_rotation(fit.params.rotation).yaw;
        worst = std::max(worst, std::abs(shift - 30.0));
    }
    return {worst <= 2.0, fmt("10 faces, worst |shift - 30| = %.4f deg", worst)};
}

Outcome lp_policy()
{
    Rng rng(501);
    const int n = 10000;
    int violations = 0;
    double sum_yaw = 0.0;
    double sum_pitch = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const PoseAngles first{rng.uniform(-60, 60), rng.uniform(-30, 30), 0.0};
        const PoseIncrement inc = sample_pose_increment(derive_seed(7, std::to_string(i)), first);
        const bool in_range = std::abs(inc.delta_yaw) <= 45.0 && std::abs(inc.delta_pitch) <= 30.0;
        const bool yaw_sign = first.yaw >= 0 ? inc.delta_yaw >= 0 : inc.delta_yaw <= 0;
        const bool pitch_sign = first.pitch >= 0 ? inc.delta_pitch >= 0 : inc.delta_pitch <= 0;
        violations += (in_range && yaw_sign && pitch_sign) ? 0 : 1;
        sum_yaw += std::abs(inc.delta_yaw);
        sum_pitch += std::abs(inc.delta_pitch);
    }
    const double mean_yaw = sum_yaw / n;
    const double mean_pitch = sum_pitch / n;

    TempDir dir("acceptance_lp");
    const auto model = poseaug::testing::make_synthetic_model(300, 5, 5, 502);
    poseaug::testing::write_face_corpus(dir.path() / "in", model, {4, 2, 96, 503});
    const auto manifest = read_manifest(dir.path() / "in/manifest.tsv");
    LpConfig cfg;
    cfg.seed = 3;
    const LpResult result = build_lp(manifest, dir.path() / "in/manifest.tsv", model, dir.path() / "out", cfg);
    const auto written = read_manifest(dir.path() / "out/manifest.tsv");
    const bool doubled = result.skips.empty() && written.size() == 2 * manifest.size();

    const bool pass = violations == 0 && std::abs(mean_yaw - 22.5) <= 1.0 && std::abs(mean_pitch - 15.0) <= 1.0 && doubled;
    std::ostringstream s;
    s << violations << " violations in " << n << ", mean |dyaw| " << fmt("%.3f", mean_yaw) << ", mean |dpitch| "
      << fmt("%.3f", mean_pitch) << ", " << manifest.size() << " -> " << written.size() << " entries";
    return {pass, s.str()};
}

Outcome segment_rules()
{
    struct Case
    {
        int duration;
        int i_mid;
        int total;
        SegmentReason expected;
        int first = -1; // checked when >= 0
    };
    using R = SegmentReason;
    const std::vector<Case> cases = {
        {4, 50, 100, R::too_short},     {5, 50, 100, R::ok},           {31, 50, 100, R::ok},
        {32, 50, 100, R::too_long},     {5, 12, 100, R::too_early},    {5, 13, 100, R::too_early},
        {5, 14, 100, R::ok, 0},         {5, 88, 100, R::too_late},     {5, 87, 100, R::too_late},
        {5, 85, 100, R::ok, 71},        {5, 86, 100, R::too_late},     {4, 12, 100, R::too_short},
        {33, 50, 100, R::too_long},     {20, 50, 100, R::ok, 36},      {29, 14, 29, R::ok, 0},
        {5, 14, 28, R::too_late},       {31, 15, 100, R::ok, 1},       {1, 0, 10, R::too_short},
        {12, 40, 60, R::ok, 26},        {10, 46, 60, R::too_late},
    };
    int mismatches = 0;
    std::string first_bad;
    for (const auto& c : cases)
    {
        const int start = c.i_mid - (c.duration - 1) / 2;
        const WordBoundary b{"WORD", start, start + c.duration - 1};
        const SegmentDecision d = decide_segment(b, c.total);
        bool ok = d.reason == c.expected && d.accepted == (c.expected == R::ok) && d.i_mid == c.i_mid;
        if (ok && c.first >= 0)
        {
            ok = d.first == c.first && d.last == c.first + kClipLength - 1;
        }
        if (!ok)
        {
            ++mismatches;
            if (first_bad.empty())
            {
                first_bad = " first mismatch: d=" + std::to_string(c.duration) + " mid=" + std::to_string(c.i_mid) +
                            " N=" + std::to_string(c.total) + " got " + to_string(d.reason);
            }
        }
    }
    return {mismatches == 0, std::to_string(cases.size() - mismatches) + "/" + std::to_string(cases.size()) +
                                 " cases match" + first_bad};
}

Outcome bin_edges()
{
    const std::vector<double> angles = {0, 14.999, 15, 29.999, 30, 44.999, 45, 59.999, 60, 90};
    const std::vector<int> expected = {0, 0, 1, 1, 2, 2, 3, 3, 4, 4};
    std::string got;
    bool pass = true;
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        const int b = pose_bin(angles[i]);
        pass = pass && b == expected[i];
        got += (i ? "," : "") + std::to_string(b);
    }
    return {pass, "bins {" + got + "}"};
}

Outcome evaluation_fixture()
{
    const fs::path fixture = fs::path(POSEAUG_TEST_DATA) / "eval_fixture";
    const EvalReport report =
        evaluate(read_predictions(fixture / "predictions.tsv"), read_manifest(fixture / "manifest.tsv"));
    const std::array<std::array<int, 2>, 5> yaw = {{{2, 2}, {2, 1}, {2, 1}, {1, 1}, {3, 2}}};
    const std::array<std::array<int, 2>, 5> pitch = {{{5, 3}, {2, 1}, {1, 1}, {1, 1}, {1, 1}}};
    bool pass = report.total == 10 && report.correct == 7 && std::abs(report.accuracy - 70.0) < 1e-12;
    for (int b = 0; b < kNumPoseBins; ++b)
    {
        pass = pass && report.yaw.bins[b].count == yaw[b][0] && report.yaw.bins[b].correct == yaw[b][1];
        pass = pass && report.pitch.bins[b].count == pitch[b][0] && report.pitch.bins[b].correct == pitch[b][1];
    }
    const bool kv_match = format_report_kv(report) == slurp(fixture / "expected_report.kv");
    return {pass && kv_match, fmt("overall %.2f%%", report.accuracy) + ", bin tables " + (pass ? "match" : "differ") +
                                  ", kv " + (kv_match ? "identical" : "differs")};
}

std::string q(const fs::path& p)
{
    return "'" + p.string() + "'";
}

int run(const std::string& cmd)
{
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Every regular file under root, keyed by relative path.
std::vector<std::pair<std::string, std::string>> tree(const fs::path& root)
{
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
    {
        if (e.is_regular_file())
        {
            files.emplace_back(fs::relative(e.path(), root).string(), slurp(e.path()));
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

Outcome determinism()
{
    TempDir dir("acceptance_determinism");
    const auto model = poseaug::testing::make_synthetic_model(300, 5, 5, 901);
    poseaug::testing::write_face_corpus(dir.path() / "faces", model, {4, 3, 128, 902});
    poseaug::testing::write_sentence_corpus(dir.path() / "sentences", 3, 903);
    const fs::path fixture = fs::path(POSEAUG_TEST_DATA) / "eval_fixture";
    const fs::path faces = dir.path() / "faces";

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"fit", "fit --seed 5 --manifest " + q(faces / "manifest.tsv") + " --model " + q(faces / "model.bin")},
        {"build-lp", "build-lp --seed 5 --manifest " + q(faces / "manifest.tsv") + " --model " + q(faces / "model.bin")},
        {"preprocess", "preprocess --aug2d --seed 5 --manifest " + q(faces / "manifest.tsv")},
        {"segment", "segment --seed 5 --manifest " + q(dir.path() / "sentences/sentences.tsv") + " --vocab " +
                        q(dir.path() / "sentences/vocab.txt")},
        {"evaluate", "evaluate --seed 5 --manifest " + q(fixture / "manifest.tsv") + " --predictions " +
                         q(fixture / "predictions.tsv")},
    };
    std::string failed;
    for (const auto& [name, args] : commands)
    {
        const std::string base = std::string(POSEAUG_CLI) + " " + args + " --out ";
        const fs::path a = dir.path() / (name + "_a");
        const fs::path b = dir.path() / (name + "_b");
        const fs::path c = dir.path() / (name + "_c");
        const bool ran = run(base + q(a) + " --workers 1") == 0 && run(base + q(b) + " --workers 1") == 0 &&
                         run(base + q(c) + " --workers 8") == 0;
        if (!ran || tree(a).empty() || tree(a) != tree(b) || tree(a) != tree(c))
        {
            failed += " " + name;
        }
    }
    return {failed.empty(), failed.empty() ? "5 subcommands byte-identical across repeat and workers 1/8"
                                           : "differs or failed:" + failed};
}

Outcome invariant_suites()
{
    std::ifstream list(POSEAUG_UNIT_TEST_LIST);
    std::string binary;
    int total = 0;
    std::string failed;
    const auto t0 = std::chrono::steady_clock::now();
    while (std::getline(list, binary))
    {
        if (binary.empty())
        {
            continue;
        }
        ++total;
        if (run(q(binary)) != 0)
        {
            failed += " " + fs::path(binary).filename().string();
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = total > 0 && failed.empty() && elapsed < 120.0;
    return {pass, std::to_string(total) + " unit binaries" + (failed.empty() ? " passed" : ", failed:" + failed) +
                      fmt(", %.1f s", elapsed)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"fit round-trip", fit_round_trip},
        {"identity render", identity_render},
        {"rotated-render oracle", rotated_quad_oracle},
        {"pose self-consistency", pose_self_consistency},
        {"LP increment policy", lp_policy},
        {"segment rules", segment_rules},
        {"pose bin edges", bin_edges},
        {"evaluation fixture", evaluation_fixture},
        {"determinism", determinism},
        {"invariant suites", invariant_suites},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
