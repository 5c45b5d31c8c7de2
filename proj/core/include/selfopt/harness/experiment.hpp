#pragma once

#include <functional>

#include "selfopt/harness/config.hpp"

namespace selfopt::harness {

struct PhaseTotals {
    Step idle = 0;
    Step exploit = 0;
    Step explore = 0;
    Step total() const { return idle + exploit + explore; }
};

struct StepRow {
    Step step = 0;
    agent::Phase phase = agent::Phase::idle_t;
    std::size_t nu_t = 0;
    std::ptrdiff_t nu_e = -1;  // -1 when no exploration candidate is active
    int s = 1;
    Action action;
    Rational reward;
    double running_avg = 0.0;
};

struct RunSummary {
    std::uint64_t seed = 0;
    Step horizon = 0;
    double final_running_avg = 0.0;
    double true_optimal_value = 0.0;
    double abs_error = 0.0;
    int final_s = 1;
    std::size_t final_nu_t = 0;
    PhaseTotals phases;
    std::size_t prepare_count = 0;
};

// Optional per-step observer; called after the step is recorded.
using StepSink = std::function<void(const StepRow&, const agent::SelfOptimizingAgent&)>;

// One seeded interaction of the agent against class member true_index.
RunSummary simulate(const agent::ClassSpec& cls, std::size_t true_index, Step horizon,
                    std::uint64_t seed, const agent::AgentOptions& options,
                    const StepSink& sink = nullptr);

// Full experiment: one trajectory CSV per seed plus an index CSV, into
// out_dir (resolved already). Seeds fan out to worker threads; files are
// byte-identical for identical (config, seed). Returns summaries in seed
// order.
std::vector<RunSummary> run_experiment(const ExperimentConfig& config,
                                       const std::string& out_dir);

agent::AgentOptions agent_options_from(const AgentConfig& config);

}  // namespace selfopt::harness
