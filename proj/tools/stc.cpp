#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stc/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"space-time code workbench"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 0;
    bool seed_given = false;
    bool threads_given = false;

    const char* names[] = {"construct", "verify", "waterfill", "udm", "outage", "simulate"};
    const char* descs[] = {"build a codebook and write it out",
                           "run the universality check matched to a codebook",
                           "worst-case channel per codeword pair by inverse waterfilling",
                           "build a matrix family and check decodability",
                           "Monte Carlo outage probability against the analytic curve",
                           "seeded word-error simulation with ML decoding"};
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "job description (json)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_given = true;
        });
        sub->add_option("--threads", threads, "worker threads (0 = all)")
            ->each([&](const std::string&) { threads_given = true; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string job = app.get_subcommands().at(0)->get_name();
        const stc::Json document = stc::Json::parse(stc::read_text_file(config_path));
        const stc::ExperimentConfig cfg = stc::parse_config(document);
        if (cfg.job != job)
            throw std::invalid_argument("job: config says \"" + cfg.job +
                                        "\" but the subcommand is \"" + job + "\"");
        stc::RunOptions opts;
        opts.out_dir = out_dir;
        if (seed_given) opts.seed_override = seed;
        if (threads_given) opts.threads_override = threads;
        const stc::RunOutcome outcome = stc::run_experiment(cfg, opts);
        std::cout << outcome.summary.dump() << "\n";
        if (outcome.exit_code != 0)
            std::cerr << "failed: " << outcome.failing_stage << "\n";
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
