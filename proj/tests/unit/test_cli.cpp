#include "poseaug/dataset/manifest.hpp"
#include "poseaug/render/image.hpp"

#include "corpus.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <cstdlib>
#include <sys/wait.h>

using namespace poseaug;
using poseaug::testing::slurp;
using poseaug::testing::TempDir;

namespace {

const std::filesystem::path kFixture = POSEAUG_TEST_DATA "/eval_fixture";

struct Run
{
    int exit_code;
    std::string out;
    std::string err;
};

Run run_cli(const std::string& args, const std::filesystem::path& scratch)
{
    const auto out = scratch / "stdout.txt";
    const auto err = scratch / "stderr.txt";
    const std::string cmd = std::string(POSEAUG_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string q(const std::filesystem::path& p)
{
    return "'" + p.string() + "'";
}

} // namespace

TEST(Cli, UsageErrors)
{
    TempDir dir("cli_usage");
    EXPECT_EQ(run_cli("", dir.path()).exit_code, 2);
    const auto r = run_cli("fit --out x", dir.path());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(r.err.rfind("error\tusage\t", 0), 0u);
}

TEST(Cli, FitWritesPosesAndIsDeterministic)
{
    TempDir dir("cli_fit");
    const auto model = poseaug::testing::make_synthetic_model(300, 5, 5, 1);
    poseaug::testing::write_face_corpus(dir.path() / "in", model, {3, 3, 96, 2});
    const std::string base = "fit --manifest " + q(dir.path() / "in/manifest.tsv") + " --model " +
                             q(dir.path() / "in/model.bin") + " --out ";
    ASSERT_EQ(run_cli(base + q(dir.path() / "a"), dir.path()).exit_code, 0);
    ASSERT_EQ(run_cli(base + q(dir.path() / "b") + " --workers 8", dir.path()).exit_code, 0);
    const auto rows = read_manifest(dir.path() / "a/manifest.tsv");
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows)
    {
        ASSERT_TRUE(r.mean_abs_yaw && r.mean_abs_pitch);
        EXPECT_TRUE(std::isfinite(*r.mean_abs_yaw));
        EXPECT_EQ(r.frame_count, 3);
        EXPECT_TRUE(std::filesystem::exists(dir.path() / "a" / r.path / "frame_0000.txt"));
    }
    EXPECT_EQ(slurp(dir.path() / "a/manifest.tsv"), slurp(dir.path() / "b/manifest.tsv"));
}

TEST(Cli, FitFailurePolicy)
{
    TempDir dir("cli_fit_fail");
    const auto model = poseaug::testing::make_synthetic_model(300, 5, 5, 3);
    poseaug::testing::write_face_corpus(dir.path() / "in", model, {10, 2, 96, 4});
    std::filesystem::remove(dir.path() / "in/videos/vid004/frame_0001.txt");
    const std::string base = "fit --manifest " + q(dir.path() / "in/manifest.tsv") + " --model " +
                             q(dir.path() / "in/model.bin") + " --out ";
    auto r = run_cli(base + q(dir.path() / "a"), dir.path());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.err.find("error\tfit\tvid004\t"), std::string::npos);
    EXPECT_NE(slurp(dir.path() / "a/failures.tsv").find("vid004"), std::string::npos);

    std::filesystem::remove(dir.path() / "in/videos/vid007/frame_0000.txt");
    r = run_cli(base + q(dir.path() / "b"), dir.path());
    EXPECT_EQ(r.exit_code, 1);
}

TEST(Cli, BuildLpDoublesTwoVideos)
{
    TempDir dir("cli_build_lp");
    const auto model = poseaug::testing::make_synthetic_model(300, 5, 5, 5);
    poseaug::testing::write_face_corpus(dir.path() / "in", model, {2, 2, 96, 6});
    const std::string base = "build-lp --seed 3 --manifest " + q(dir.path() / "in/manifest.tsv") + " --model " +
                             q(dir.path() / "in/model.bin") + " --out ";
    ASSERT_EQ(run_cli(base + q(dir.path() / "a"), dir.path()).exit_code, 0);
    ASSERT_EQ(run_cli(base + q(dir.path() / "b") + " --workers 8", dir.path()).exit_code, 0);
    EXPECT_EQ(read_manifest(dir.path() / "a/manifest.tsv").size(), 4u);
    EXPECT_EQ(slurp(dir.path() / "a/manifest.tsv"), slurp(dir.path() / "b/manifest.tsv"));
    EXPECT_EQ(slurp(dir.path() / "a/videos/vid001_lp/frame_0001.ppm"),
              slurp(dir.path() / "b/videos/vid001_lp/frame_0001.ppm"));
}

TEST(Cli, PreprocessProduces88PxClips)
{
    TempDir dir("cli_preprocess");
    const auto model = poseaug::testing::make_synthetic_model(300, 5, 5, 7);
    poseaug::testing::write_face_corpus(dir.path() / "in", model, {2, 2, 128, 8});
    const std::string base = "preprocess --aug2d --manifest " + q(dir.path() / "in/manifest.tsv") + " --out ";
    ASSERT_EQ(run_cli(base + q(dir.path() / "a"), dir.path()).exit_code, 0);
    ASSERT_EQ(run_cli(base + q(dir.path() / "b") + " --workers 8", dir.path()).exit_code, 0);
    const auto rows = read_manifest(dir.path() / "a/manifest.tsv");
    ASSERT_EQ(rows.size(), 2u);
    const Image f = read_ppm(dir.path() / "a" / rows[0].path / "frame_0000.ppm");
    EXPECT_EQ(f.width, 88);
    EXPECT_EQ(f.height, 88);
    EXPECT_EQ(slurp(dir.path() / "a/manifest.tsv"), slurp(dir.path() / "b/manifest.tsv"));
    EXPECT_EQ(slurp(dir.path() / "a/videos/vid001/frame_0001.ppm"), slurp(dir.path() / "b/videos/vid001/frame_0001.ppm"));

    std::ofstream(dir.path() / "aug.cfg") << "enable_flip = false\nseed = 5\n";
    ASSERT_EQ(run_cli("preprocess --manifest " + q(dir.path() / "in/manifest.tsv") + " --aug-config " +
                          q(dir.path() / "aug.cfg") + " --out " + q(dir.path() / "c"),
                      dir.path())
                  .exit_code,
              0);
}

TEST(Cli, SegmentCutsClipsAndLogsRejections)
{
    TempDir dir("cli_segment");
    poseaug::testing::write_sentence_corpus(dir.path() / "in", 3, 9);
    const std::string base = "segment --seed 4 --manifest " + q(dir.path() / "in/sentences.tsv") + " --vocab " +
                             q(dir.path() / "in/vocab.txt") + " --out ";
    ASSERT_EQ(run_cli(base + q(dir.path() / "a"), dir.path()).exit_code, 0);
    ASSERT_EQ(run_cli(base + q(dir.path() / "b") + " --workers 8", dir.path()).exit_code, 0);
    const auto rows = read_manifest(dir.path() / "a/manifest.tsv");
    EXPECT_EQ(rows.size(), 9u); // three accepted words per sentence
    for (const auto& r : rows)
    {
        EXPECT_EQ(r.frame_count, 29);
        EXPECT_TRUE(std::filesystem::exists(dir.path() / "a" / r.path / "frame_0028.ppm"));
    }
    const std::string rej = slurp(dir.path() / "a/rejections.tsv");
    for (const char* reason : {"too_early", "too_short", "too_late", "unknown_word"})
    {
        EXPECT_NE(rej.find(reason), std::string::npos) << reason;
    }
    for (const char* file : {"manifest.tsv", "rejections.tsv", "split_counts.tsv"})
    {
        EXPECT_EQ(slurp(dir.path() / "a" / file), slurp(dir.path() / "b" / file)) << file;
    }
}

TEST(Cli, EvaluateFixture)
{
    TempDir dir("cli_evaluate");
    const std::string base = "evaluate --manifest " + q(kFixture / "manifest.tsv") + " --predictions " +
                             q(kFixture / "predictions.tsv") + " --out ";
    const auto r = run_cli(base + q(dir.path() / "a"), dir.path());
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("overall accuracy: 70.00% (7/10)"), std::string::npos);
    EXPECT_NE(r.out.find("66.67 (2/3)"), std::string::npos);
    EXPECT_EQ(slurp(dir.path() / "a/report.kv"), slurp(kFixture / "expected_report.kv"));
    ASSERT_EQ(run_cli(base + q(dir.path() / "b") + " --workers 8", dir.path()).exit_code, 0);
    EXPECT_EQ(slurp(dir.path() / "a/report.txt"), slurp(dir.path() / "b/report.txt"));

    std::ofstream(dir.path() / "bad.tsv") << "nope\tA\tA\n";
    const auto bad = run_cli("evaluate --manifest " + q(kFixture / "manifest.tsv") + " --predictions " +
                                 q(dir.path() / "bad.tsv") + " --out " + q(dir.path() / "c"),
                             dir.path());
    EXPECT_EQ(bad.exit_code, 1);
    EXPECT_EQ(bad.err.rfind("error\tevaluate\t-\t", 0), 0u);
    EXPECT_NE(bad.err.find("nope"), std::string::npos);
}
