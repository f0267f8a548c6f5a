#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "stc/channel.hpp"
#include "stc/serialize.hpp"

namespace stc {

// Validated job description. Jobs: construct, verify, waterfill, udm, outage,
// simulate. Validation is strict: unknown fields, wrong types and out-of-range
// values are rejected with the full field path in the message.
struct ExperimentConfig {
    std::string job;
    Json spec;
    bool needs_seed = false;  // stochastic jobs must get a seed somewhere
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

ExperimentConfig parse_config(const Json& document);

// Codebook construction from a "code" object ({"family": ..., ...}). The seed
// is consulted only by seeded families (permutation-search).
Codebook build_codebook(const Json& code_spec, const std::string& path,
                        std::optional<std::uint64_t> seed = std::nullopt);

FadingModel parse_channel(const Json& channel_spec, const std::string& path);

struct RunOptions {
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
};

struct RunOutcome {
    int exit_code = 0;          // 0 done, 2 a checked criterion failed
    std::string failing_stage;  // set when exit_code == 2
    Json summary;               // also written to the output directory
};

// Executes the job, writes its artifacts plus manifest.json into out_dir.
// Data artifacts are byte-stable for a fixed config and seed; the manifest
// carries the only timestamp. Runtime failures throw with the stage name.
RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace stc
