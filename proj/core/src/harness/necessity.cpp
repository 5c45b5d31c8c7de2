#include <algorithm>
#include <stdexcept>

#include "selfopt/environment.hpp"
#include "selfopt/envs/families.hpp"
#include "selfopt/errors.hpp"
#include "selfopt/harness/necessity.hpp"
#include "selfopt/random.hpp"

namespace selfopt::harness {

namespace {

// Deterministic probe plan before any lock: for each level l = 1..S, one a
// (topping the a-count to l) followed by l+2 b's (enough for the run to
// exceed the frozen count and surface the first reward of 2 at level l);
// after level S, a forever.
class ProbePolicy final : public Policy {
public:
    explicit ProbePolicy(int S) : S_(S) {
        Step end = 0;
        for (int level = 1; level <= S_; ++level) {
            end += 1 + (static_cast<Step>(level) + 2);
            block_ends_.push_back(end);
        }
    }

    Action act(const History& h) override {
        if (h.length() < processed_) {
            throw std::logic_error("probe policy fed a shrinking history");
        }
        for (Step t = processed_ + 1; t <= h.length(); ++t) {
            if (h.percept(t).reward == Rational(2)) locked_ = true;
        }
        processed_ = h.length();
        if (locked_) return Action{1};  // stay on b once it pays
        Step t = h.length() + 1;
        if (block_ends_.empty() || t > block_ends_.back()) return Action{0};
        std::size_t block = 0;
        while (block_ends_[block] < t) ++block;
        Step block_start = block == 0 ? 1 : block_ends_[block - 1] + 1;
        return Action{t == block_start ? 0 : 1};
    }

    const std::vector<Step>& block_ends() const { return block_ends_; }

private:
    int S_;
    std::vector<Step> block_ends_;
    Step processed_ = 0;
    bool locked_ = false;
};

struct RolloutStats {
    std::vector<double> running_avg;  // running_avg[t-1] after step t
    double final_avg = 0.0;
};

RolloutStats rollout(const EnvironmentModel& env, Policy& policy, Step horizon,
                     std::uint64_t seed) {
    RandomSource rng(seed);
    History h;
    auto cursor = env.cursor();
    Rational total(0);
    RolloutStats stats;
    stats.running_avg.reserve(static_cast<std::size_t>(horizon));
    for (Step t = 1; t <= horizon; ++t) {
        Action a = policy.act(h);
        Percept percept = sample_percept(cursor->distribution(a), rng);
        cursor->advance(a, percept);
        h.append(a, percept);
        total += percept.reward;
        stats.running_avg.push_back(to_double(total) / static_cast<double>(t));
    }
    stats.final_avg = stats.running_avg.back();
    return stats;
}

}  // namespace

std::unique_ptr<Policy> necessity_probe_policy(int S) {
    if (S < 1) throw ConfigError("necessity probe needs S >= 1");
    return std::make_unique<ProbePolicy>(S);
}

NecessityReport demo_necessity(int S, Step horizon, std::uint64_t seed) {
    if (S < 1) throw ConfigError("necessity demo needs S >= 1");
    ProbePolicy plan(S);
    if (horizon < plan.block_ends().back()) {
        throw ConfigError("necessity demo horizon shorter than the probe plan");
    }

    NecessityReport report;
    report.S = S;
    report.horizon = horizon;
    report.probe_block_ends = plan.block_ends();
    report.burn_in_step = plan.block_ends().back();

    // Probe on level 0: every b the probe invests is a dead loss there.
    auto level0 = envs::make_trap_environment({0, "trap-0", 0.5});
    {
        ProbePolicy probe(S);
        auto stats = rollout(*level0.environment, probe, horizon, derive_seed(seed, 0));
        double lowest = stats.running_avg[static_cast<std::size_t>(report.burn_in_step) - 1];
        for (Step t = report.burn_in_step; t <= horizon; ++t) {
            lowest = std::min(lowest, stats.running_avg[static_cast<std::size_t>(t) - 1]);
        }
        report.min_running_avg_after_burn_in = lowest;
        report.final_running_avg = stats.final_avg;
    }

    // Control on level 0: constant a holds the average at exactly 1.
    {
        auto always_a = constant_policy(Action{0});
        auto stats = rollout(*level0.environment, *always_a, horizon, derive_seed(seed, 1));
        double lowest = stats.running_avg.front();
        for (double v : stats.running_avg) lowest = std::min(lowest, v);
        report.always_a_min_running_avg = lowest;
    }

    // Probe on each level s = 1..S: the level-s block unlocks the reward-2
    // regime and the lock keeps it.
    for (int s = 1; s <= S; ++s) {
        auto level = envs::make_trap_environment(
            {s, "trap-" + std::to_string(s), 0.5});
        ProbePolicy probe(S);
        auto stats = rollout(*level.environment, probe, horizon,
                             derive_seed(seed, 2 + static_cast<std::uint64_t>(s)));
        report.probe_final_avg_on_level.push_back(stats.final_avg);
    }
    return report;
}

void print_report(const NecessityReport& report, std::ostream& out) {
    out << "catch-up necessity demo (S=" << report.S << ", horizon=" << report.horizon
        << ")\n";
    out << "  probe blocks end at steps:";
    for (Step t : report.probe_block_ends) out << ' ' << t;
    out << "\n";
    out << "  level 0, probe:    running average dips to "
        << report.min_running_avg_after_burn_in << " by step " << report.burn_in_step
        << ", ends at " << report.final_running_avg << "\n";
    out << "  level 0, always-a: running average never leaves "
        << report.always_a_min_running_avg << "\n";
    for (std::size_t i = 0; i < report.probe_final_avg_on_level.size(); ++i) {
        out << "  level " << (i + 1) << ", probe:    final average "
            << report.probe_final_avg_on_level[i] << " (reward-2 regime reached)\n";
    }
    out << "  every policy that masters all levels must sink unbounded total\n"
        << "  loss into level 0: linear catch-up debt cannot be declared away.\n";
}

}  // namespace selfopt::harness
