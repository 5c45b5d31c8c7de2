#include "selfopt/mdp/finite_mdp.hpp"

#include <cmath>
#include <string>

#include "selfopt/errors.hpp"

namespace selfopt::mdp {

double FiniteMdp::expected_reward(int state, int action) const {
    const auto& t = transition[static_cast<std::size_t>(action)][static_cast<std::size_t>(state)];
    const auto& r = reward[static_cast<std::size_t>(action)][static_cast<std::size_t>(state)];
    double out = 0.0;
    for (std::size_t next = 0; next < t.size(); ++next) out += t[next] * r[next];
    return out;
}

void FiniteMdp::validate() const {
    if (n_states < 1 || n_actions < 1) {
        throw ConfigError("FiniteMdp needs at least one state and one action");
    }
    auto na = static_cast<std::size_t>(n_actions);
    auto ns = static_cast<std::size_t>(n_states);
    if (transition.size() != na || reward.size() != na) {
        throw ConfigError("FiniteMdp: per-action table count mismatch");
    }
    for (std::size_t a = 0; a < na; ++a) {
        if (transition[a].size() != ns || reward[a].size() != ns) {
            throw ConfigError("FiniteMdp: per-state row count mismatch");
        }
        for (std::size_t s = 0; s < ns; ++s) {
            if (transition[a][s].size() != ns || reward[a][s].size() != ns) {
                throw ConfigError("FiniteMdp: row length mismatch");
            }
            double total = 0.0;
            for (double p : transition[a][s]) {
                if (p < -1e-15) throw ConfigError("FiniteMdp: negative probability");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-9) {
                throw ConfigError("FiniteMdp: transition row (s=" + std::to_string(s) +
                                  ", a=" + std::to_string(a) + ") sums to " +
                                  std::to_string(total));
            }
        }
    }
}

Matrix policy_chain(const FiniteMdp& mdp, const StationaryPolicy& policy) {
    if (policy.size() != static_cast<std::size_t>(mdp.n_states)) {
        throw ConfigError("policy length does not match state count");
    }
    Matrix chain;
    chain.reserve(policy.size());
    for (std::size_t s = 0; s < policy.size(); ++s) {
        chain.push_back(mdp.transition[static_cast<std::size_t>(policy[s])][s]);
    }
    return chain;
}

std::vector<double> policy_expected_rewards(const FiniteMdp& mdp,
                                            const StationaryPolicy& policy) {
    std::vector<double> out;
    out.reserve(policy.size());
    for (std::size_t s = 0; s < policy.size(); ++s) {
        out.push_back(mdp.expected_reward(static_cast<int>(s), policy[s]));
    }
    return out;
}

}  // namespace selfopt::mdp
