#pragma once

#include "selfopt/mdp/finite_mdp.hpp"

namespace selfopt::mdp {

struct GainBiasSolution {
    double gain = 0.0;
    std::vector<double> bias;       // normalized: bias[reference_state] = 0
    StationaryPolicy policy;        // greedy policy at convergence
    int iterations = 0;
    double residual_span = 0.0;     // span of the final Bellman residual
};

struct SolveOptions {
    double tolerance = 1e-10;       // span stopping criterion
    int max_iterations = 200000;
    int reference_state = 0;
    // Damping factor of the aperiodicity transform applied internally; keeps
    // relative value iteration convergent on periodic chains while preserving
    // gain and optimal policies.
    double damping = 0.5;
};

// Average-reward optimal gain, bias and policy via relative value iteration
// with a fixed reference state. Rejects non-ergodic inputs (NonErgodicError)
// and raises std::runtime_error if the span criterion is not met within the
// iteration budget. Greedy ties break toward the lowest action index.
GainBiasSolution solve_average_reward(const FiniteMdp& mdp, const SolveOptions& options = {});

}  // namespace selfopt::mdp
