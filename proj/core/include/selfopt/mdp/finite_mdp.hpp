#pragma once

#include <vector>

#include "selfopt/types.hpp"

namespace selfopt::mdp {

using Matrix = std::vector<std::vector<double>>;

// Finite MDP in solver form: row-stochastic transition kernels per action and
// a bounded reward for each (state, action, next state) triple.
struct FiniteMdp {
    int n_states = 0;
    int n_actions = 0;
    // transition[a][s][s']
    std::vector<Matrix> transition;
    // reward[a][s][s']
    std::vector<Matrix> reward;

    double expected_reward(int state, int action) const;
    // Ensures shapes match and rows are normalized within 1e-9; throws
    // ConfigError otherwise.
    void validate() const;
};

// Deterministic stationary policy: action per state.
using StationaryPolicy = std::vector<int>;

// Chain induced by a stationary policy.
Matrix policy_chain(const FiniteMdp& mdp, const StationaryPolicy& policy);

std::vector<double> policy_expected_rewards(const FiniteMdp& mdp,
                                            const StationaryPolicy& policy);

}  // namespace selfopt::mdp
