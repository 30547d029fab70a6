#include "poseaug/eval/pose_eval.hpp"

#include "corpus.hpp"
#include "synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace poseaug;

namespace {

const std::filesystem::path kFixture = POSEAUG_TEST_DATA "/eval_fixture";

ManifestEntry posed(const std::string& id, double yaw, double pitch)
{
    ManifestEntry e;
    e.entry_id = id;
    e.path = id;
    e.word = "W";
    e.split = "test";
    e.mean_abs_yaw = yaw;
    e.mean_abs_pitch = pitch;
    return e;
}

} // namespace

TEST(SequencePose, AbsoluteThenMean)
{
    EXPECT_EQ(sequence_pose({{-20, 10, 0}, {-20, 10, 3}}).mean_abs_yaw, 20.0);
    EXPECT_EQ(sequence_pose({{-20, 10, 0}, {-20, 10, 3}}).mean_abs_pitch, 10.0);
    EXPECT_EQ(sequence_pose({{-30, 0, 0}, {30, 0, 0}}).mean_abs_yaw, 30.0);
    const auto single = sequence_pose({{-7.5, -3.25, 1}});
    EXPECT_EQ(single.mean_abs_yaw, 7.5);
    EXPECT_EQ(single.mean_abs_pitch, 3.25);
    EXPECT_THROW(sequence_pose({}), std::invalid_argument);
}

TEST(PoseBin, Edges)
{
    EXPECT_EQ(pose_bin(14.9), 0);
    EXPECT_EQ(pose_bin(15.0), 1);
    EXPECT_EQ(pose_bin(90.0), 4);
    EXPECT_EQ(pose_bin(95.0), 4);
    EXPECT_EQ(pose_bin(0.0), 0);
    EXPECT_THROW(pose_bin(-0.1), std::invalid_argument);
}

TEST(PoseBin, ExactlyOneBinMatches)
{
    Rng rng(3);
    for (int i = 0; i < 10000; ++i)
    {
        const double a = rng.uniform(0.0, 90.0);
        int matches = 0;
        for (int b = 0; b < kNumPoseBins; ++b)
        {
            const double lo = kPoseBinEdges[static_cast<std::size_t>(b)];
            const double hi = kPoseBinEdges[static_cast<std::size_t>(b) + 1];
            const bool in = a >= lo && (b == kNumPoseBins - 1 ? a <= hi : a < hi);
            matches += in ? 1 : 0;
            if (in)
            {
                EXPECT_EQ(pose_bin(a), b);
            }
        }
        EXPECT_EQ(matches, 1) << a;
    }
}

TEST(Evaluate, AllCorrect)
{
    const std::vector<ManifestEntry> m{posed("a", 5, 50), posed("b", 70, 20)};
    const auto r = evaluate({{"a", "X", "X"}, {"b", "Y", "Y"}}, m);
    EXPECT_EQ(r.accuracy, 100.0);
    for (const auto* t : {&r.yaw, &r.pitch})
    {
        for (const auto& bin : t->bins)
        {
            if (bin.count > 0)
            {
                EXPECT_EQ(*bin.accuracy(), 100.0);
            }
            else
            {
                EXPECT_FALSE(bin.accuracy().has_value());
            }
        }
    }
}

TEST(Evaluate, HandTabulatedFixture)
{
    const auto r = evaluate(read_predictions(kFixture / "predictions.tsv"), read_manifest(kFixture / "manifest.tsv"));
    EXPECT_EQ(r.total, 10);
    EXPECT_EQ(r.correct, 7);
    EXPECT_EQ(r.accuracy, 70.0);
    const std::array<int, 5> yaw_count{2, 2, 2, 1, 3}, yaw_correct{2, 1, 1, 1, 2};
    const std::array<int, 5> pitch_count{5, 2, 1, 1, 1}, pitch_correct{3, 1, 1, 1, 1};
    for (std::size_t b = 0; b < 5; ++b)
    {
        EXPECT_EQ(r.yaw.bins[b].count, yaw_count[b]) << b;
        EXPECT_EQ(r.yaw.bins[b].correct, yaw_correct[b]) << b;
        EXPECT_EQ(r.pitch.bins[b].count, pitch_count[b]) << b;
        EXPECT_EQ(r.pitch.bins[b].correct, pitch_correct[b]) << b;
    }
    EXPECT_EQ(format_report_kv(r), poseaug::testing::slurp(kFixture / "expected_report.kv"));
}

TEST(Evaluate, Errors)
{
    const std::vector<ManifestEntry> m{posed("a", 5, 5), posed("b", 5, 5)};
    EXPECT_THROW(evaluate({}, m), std::invalid_argument);
    EXPECT_THROW(evaluate({{"a", "X", "X"}, {"a", "X", "Y"}}, m), std::invalid_argument);
    try
    {
        evaluate({{"a", "X", "X"}, {"zz", "X", "X"}, {"yy", "X", "X"}}, m);
        FAIL();
    }
    catch (const std::invalid_argument& e)
    {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("zz"), std::string::npos);
        EXPECT_NE(msg.find("yy"), std::string::npos);
    }
    ManifestEntry unposed = posed("c", 0, 0);
    unposed.mean_abs_yaw.reset();
    EXPECT_THROW(evaluate({{"c", "X", "X"}}, {unposed}), std::invalid_argument);
}

TEST(Evaluate, OverallIsWeightedMeanOfBinsAndOrderIndependent)
{
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<ManifestEntry> m;
        std::vector<PredictionRecord> preds;
        const int n = static_cast<int>(rng.uniform_int(1, 60));
        for (int i = 0; i < n; ++i)
        {
            const std::string id = "e" + std::to_string(i);
            m.push_back(posed(id, rng.uniform(0, 100), rng.uniform(0, 100)));
            preds.push_back({id, rng.bernoulli(0.6) ? "A" : "B", "A"});
        }
        const auto r = evaluate(preds, m);
        for (const auto* t : {&r.yaw, &r.pitch})
        {
            double weighted = 0.0;
            int count = 0;
            for (const auto& bin : t->bins)
            {
                weighted += bin.accuracy().value_or(0.0) * bin.count;
                count += bin.count;
            }
            EXPECT_EQ(count, n);
            EXPECT_NEAR(weighted / count, r.accuracy, 1e-9);
        }
        for (int i = n - 1; i > 0; --i)
        {
            std::swap(preds[static_cast<std::size_t>(i)], preds[static_cast<std::size_t>(rng.uniform_int(0, i))]);
        }
        EXPECT_EQ(format_report_kv(evaluate(preds, m)), format_report_kv(r));
    }
}
