#pragma once

#include <memory>
#include <ostream>
#include <vector>

#include "selfopt/policy.hpp"
#include "selfopt/types.hpp"

namespace selfopt::harness {

// Hand-built probe policy for the trap family: for levels 1..S it tops the
// a-count up to the level, then takes an ever-longer b-run, locking onto b
// forever as soon as a reward of 2 appears; after level S it plays a forever.
// It self-optimizes every trap level 1..S.
std::unique_ptr<Policy> necessity_probe_policy(int S);

struct NecessityReport {
    int S = 0;
    Step horizon = 0;
    // Probe policy on the level-0 trap: the running average must dip while
    // the probe pays for exploration that level 0 never rewards.
    std::vector<Step> probe_block_ends;     // step at which each level's probe completed
    Step burn_in_step = 0;                  // completion of the final probe block
    double min_running_avg_after_burn_in = 0.0;
    double final_running_avg = 0.0;
    // Control: the always-a policy keeps the average at exactly 1 throughout.
    double always_a_min_running_avg = 0.0;
    // Probe policy on each trap level s = 1..S reaches the reward-2 regime.
    std::vector<double> probe_final_avg_on_level;
};

// Runs the probe and control policies on the trap family to exhibit why the
// agent's guarantees require the o(k) catch-up condition that levels >= 1
// deliberately break.
NecessityReport demo_necessity(int S, Step horizon, std::uint64_t seed);

void print_report(const NecessityReport& report, std::ostream& out);

}  // namespace selfopt::harness
