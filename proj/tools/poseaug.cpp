#include "poseaug/pipeline/commands.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>

namespace {

void add_common(CLI::App* cmd, poseaug::PipelineConfig& cfg)
{
    cmd->add_option("--manifest", cfg.manifest, "Input manifest")->required();
    cmd->add_option("--out", cfg.out, "Output directory")->required();
    cmd->add_option("--seed", cfg.seed, "Global seed")->default_val(0);
    cmd->add_option("--workers", cfg.workers, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
    cmd->add_flag("-v,--verbose", cfg.verbosity, "More logging");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"poseaug: large-pose augmentation pipeline for lip-reading corpora"};
    app.require_subcommand(1);
    poseaug::PipelineConfig cfg;

    auto* fit = app.add_subcommand("fit", "Fit the face model to every video and record mean poses");
    add_common(fit, cfg);
    fit->add_option("--model", cfg.model, "Morphable model file")->required();

    auto* build = app.add_subcommand("build-lp", "Render one large-pose copy of every video");
    add_common(build, cfg);
    build->add_option("--model", cfg.model, "Morphable model file")->required();
    build->add_option("--grid-step", cfg.grid_step, "Background anchor spacing in pixels")
        ->default_val(16)
        ->check(CLI::PositiveNumber);

    auto* pre = app.add_subcommand("preprocess", "Align, crop mouth ROIs and apply video-level augmentation");
    add_common(pre, cfg);
    pre->add_flag("--aug2d", cfg.aug2d, "Enable scaling, degradation and noise patches");
    pre->add_option("--aug-config", cfg.aug_config, "Augmentation key = value file")->check(CLI::ExistingFile);

    auto* seg = app.add_subcommand("segment", "Cut 29-frame word clips from sentence recordings");
    add_common(seg, cfg);
    seg->add_option("--vocab", cfg.vocab, "Vocabulary, one word per line")->check(CLI::ExistingFile);

    auto* eval = app.add_subcommand("evaluate", "Overall and pose-binned accuracy of predictions");
    add_common(eval, cfg);
    eval->add_option("--predictions", cfg.predictions, "Predictions file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        if (e.get_exit_code() != 0)
        {
            std::cerr << "error\tusage\t-\t" << e.what() << '\n';
            std::cerr << app.help();
            return poseaug::kExitUsage;
        }
        return app.exit(e);
    }

    const std::map<CLI::App*, std::function<int(const poseaug::PipelineConfig&, std::ostream&, std::ostream&)>>
        commands{{fit, poseaug::cmd_fit},
                 {build, poseaug::cmd_build_lp},
                 {pre, poseaug::cmd_preprocess},
                 {seg, poseaug::cmd_segment},
                 {eval, poseaug::cmd_evaluate}};
    for (const auto& [sub, run] : commands)
    {
        if (sub->parsed())
        {
            cfg.seed_given = sub->count("--seed") > 0;
            const auto t0 = std::chrono::steady_clock::now();
            const int code = run(cfg, std::cout, std::cerr);
            if (cfg.verbosity > 0)
            {
                const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                std::cerr << "info\t" << sub->get_name() << "\t-\texit " << code << " after " << s << " s, output in "
                          << cfg.out.string() << '\n';
            }
            return code;
        }
    }
    return poseaug::kExitUsage;
}
