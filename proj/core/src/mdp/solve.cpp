#include "selfopt/mdp/solve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "selfopt/errors.hpp"
#include "selfopt/mdp/chain.hpp"

namespace selfopt::mdp {

GainBiasSolution solve_average_reward(const FiniteMdp& mdp, const SolveOptions& options) {
    mdp.validate();
    auto ergodic = check_ergodic(mdp);
    if (!ergodic.ergodic) {
        throw NonErgodicError(ergodic.witness_from, ergodic.witness_to,
                              "solve_average_reward rejects non-ergodic input: no path from state " +
                                  std::to_string(ergodic.witness_from) + " to state " +
                                  std::to_string(ergodic.witness_to));
    }
    if (options.reference_state < 0 || options.reference_state >= mdp.n_states) {
        throw ConfigError("reference state out of range");
    }
    if (options.damping < 0.0 || options.damping >= 1.0) {
        throw ConfigError("damping must lie in [0, 1)");
    }

    const int n = mdp.n_states;
    const int m = mdp.n_actions;
    const double tau = options.damping;

    // Precompute expected rewards; run value iteration on the damped kernels
    // tau*I + (1-tau)*P, which preserves gain and greedy policies while
    // making every chain aperiodic.
    std::vector<std::vector<double>> rho(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(m)));
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < m; ++a) rho[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = mdp.expected_reward(s, a);

    std::vector<double> h(static_cast<std::size_t>(n), 0.0);
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    GainBiasSolution solution;
    solution.policy.assign(static_cast<std::size_t>(n), 0);

    double span = 0.0;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            int best_action = 0;
            for (int a = 0; a < m; ++a) {
                const auto& row = mdp.transition[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)];
                double q = rho[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] +
                           tau * h[static_cast<std::size_t>(s)];
                for (int t = 0; t < n; ++t) {
                    q += (1.0 - tau) * row[static_cast<std::size_t>(t)] * h[static_cast<std::size_t>(t)];
                }
                if (q > best) {  // strict: ties keep the lowest action index
                    best = q;
                    best_action = a;
                }
            }
            w[static_cast<std::size_t>(s)] = best;
            solution.policy[static_cast<std::size_t>(s)] = best_action;
        }
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int s = 0; s < n; ++s) {
            double dv = w[static_cast<std::size_t>(s)] - h[static_cast<std::size_t>(s)];
            lo = std::min(lo, dv);
            hi = std::max(hi, dv);
        }
        span = hi - lo;
        solution.gain = 0.5 * (hi + lo);
        // Relative shift pins the reference state, keeping values bounded.
        double shift = w[static_cast<std::size_t>(options.reference_state)];
        for (int s = 0; s < n; ++s) h[static_cast<std::size_t>(s)] = w[static_cast<std::size_t>(s)] - shift;
        if (span < options.tolerance) {
            ++iter;
            break;
        }
    }
    if (span >= options.tolerance) {
        throw std::runtime_error("relative value iteration did not meet tolerance " +
                                 std::to_string(options.tolerance) + " within " +
                                 std::to_string(options.max_iterations) + " iterations");
    }

    // Undo the damping scale so the reported bias solves the undamped
    // evaluation equations.
    solution.bias.assign(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        solution.bias[static_cast<std::size_t>(s)] = (1.0 - tau) * h[static_cast<std::size_t>(s)];
    }
    solution.iterations = iter;
    solution.residual_span = span;
    return solution;
}

}  // namespace selfopt::mdp
