#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "selfopt/envs/families.hpp"
#include "selfopt/errors.hpp"
#include "selfopt/mdp/chain.hpp"
#include "selfopt/mdp/solve.hpp"

namespace selfopt::envs {

namespace {

Alphabet mdp_action_alphabet(int n_actions) {
    Alphabet alpha;
    for (int a = 0; a < n_actions; ++a) {
        alpha.labels.push_back(std::string(1, static_cast<char>('a' + (a % 26))) +
                               (a < 26 ? "" : std::to_string(a / 26)));
    }
    return alpha;
}

Alphabet mdp_observation_alphabet(int n_states) {
    Alphabet alpha;
    for (int s = 0; s < n_states; ++s) alpha.labels.push_back(std::to_string(s));
    return alpha;
}

void validate_spec(const MdpEnvironmentSpec& spec) {
    if (spec.n_states < 1 || spec.n_actions < 1) {
        throw ConfigError("mdp spec needs at least one state and one action");
    }
    if (spec.initial_state < 0 || spec.initial_state >= spec.n_states) {
        throw ConfigError("mdp spec: initial state out of range");
    }
    if (spec.outcomes.size() != static_cast<std::size_t>(spec.n_states)) {
        throw ConfigError("mdp spec: outcome table must have one row per state");
    }
    for (const auto& per_state : spec.outcomes) {
        if (per_state.size() != static_cast<std::size_t>(spec.n_actions)) {
            throw ConfigError("mdp spec: outcome row must have one cell per action");
        }
        for (const auto& cell : per_state) {
            double total = 0.0;
            for (const auto& outcome : cell) {
                if (outcome.next_state < 0 || outcome.next_state >= spec.n_states) {
                    throw ConfigError("mdp spec: outcome next state out of range");
                }
                if (outcome.probability < 0.0) {
                    throw ConfigError("mdp spec: negative outcome probability");
                }
                if (outcome.reward < Rational(0)) {
                    throw ConfigError("mdp spec: negative reward");
                }
                total += outcome.probability;
            }
            if (std::abs(total - 1.0) > 1e-9) {
                throw ConfigError("mdp spec: outcome cell sums to " + std::to_string(total));
            }
        }
    }
}

class MdpEnvironment final : public EnvironmentModel {
public:
    explicit MdpEnvironment(MdpEnvironmentSpec spec)
        : spec_(std::move(spec)),
          actions_(mdp_action_alphabet(spec_.n_actions)),
          observations_(mdp_observation_alphabet(spec_.n_states)) {
        r_max_ = Rational(0);
        distributions_.resize(static_cast<std::size_t>(spec_.n_states));
        for (int s = 0; s < spec_.n_states; ++s) {
            auto& per_action = distributions_[static_cast<std::size_t>(s)];
            per_action.resize(static_cast<std::size_t>(spec_.n_actions));
            for (int a = 0; a < spec_.n_actions; ++a) {
                PerceptDistribution dist;
                for (const auto& outcome : spec_.outcomes[static_cast<std::size_t>(s)]
                                                        [static_cast<std::size_t>(a)]) {
                    if (outcome.probability == 0.0) continue;
                    Percept percept{outcome.reward, outcome.next_state};
                    bool merged = false;
                    for (auto& wp : dist) {
                        if (wp.percept == percept) {
                            wp.probability += outcome.probability;
                            merged = true;
                            break;
                        }
                    }
                    if (!merged) dist.push_back({percept, outcome.probability});
                    r_max_ = std::max(r_max_, outcome.reward);
                }
                per_action[static_cast<std::size_t>(a)] = std::move(dist);
            }
        }
    }

    class StateCursor final : public Cursor {
    public:
        StateCursor(const MdpEnvironment* env, int state) : env_(env), state_(state) {}

        PerceptDistribution distribution(Action action) const override {
            if (dead_) return {{Percept{Rational(0), 0}, 1.0}};
            return env_->distributions_[static_cast<std::size_t>(state_)]
                                       [static_cast<std::size_t>(action.id)];
        }

        void advance(Action, const Percept& percept) override {
            if (percept.observation < 0 || percept.observation >= env_->spec_.n_states) {
                dead_ = true;  // off-support continuation; likelihood is 0 anyway
                return;
            }
            state_ = percept.observation;
        }

        std::unique_ptr<Cursor> clone() const override {
            return std::make_unique<StateCursor>(*this);
        }

    private:
        const MdpEnvironment* env_;
        int state_;
        bool dead_ = false;
    };

    const std::string& name() const override { return spec_.name; }
    const Alphabet& action_alphabet() const override { return actions_; }
    const Alphabet& observation_alphabet() const override { return observations_; }
    Rational reward_bound() const override { return r_max_; }

    std::unique_ptr<Cursor> cursor() const override {
        return std::make_unique<StateCursor>(this, spec_.initial_state);
    }

    const MdpEnvironmentSpec& spec() const { return spec_; }

private:
    MdpEnvironmentSpec spec_;
    Alphabet actions_;
    Alphabet observations_;
    Rational r_max_;
    // distributions_[s][a]
    std::vector<std::vector<PerceptDistribution>> distributions_;
};

// Expected rewards of the optimal stationary policy from the initial state:
// r_i = <state distribution at step i, expected one-step rewards>.
class MdpReferenceRewards final : public ReferenceRewards {
public:
    MdpReferenceRewards(mdp::Matrix chain, std::vector<double> rho, int initial_state,
                        double gain)
        : ReferenceRewards(gain), chain_(std::move(chain)), rho_(std::move(rho)) {
        dist_.assign(chain_.size(), 0.0);
        dist_[static_cast<std::size_t>(initial_state)] = 1.0;

        // Total deviation sum_i |r_i - gain|: the state distribution converges
        // geometrically, so the series is summed until it visibly flatlines.
        std::vector<double> d = dist_;
        double total = 0.0;
        int calm = 0;
        for (int i = 0; i < 200000 && calm < 64; ++i) {
            double r = 0.0;
            for (std::size_t s = 0; s < d.size(); ++s) r += d[s] * rho_[s];
            double dev = std::abs(r - gain);
            total += dev;
            calm = dev < 1e-15 ? calm + 1 : 0;
            d = advance_distribution(d);
        }
        total_deviation_ = total + 1e-9;
    }

    double deviation_budget(Step) const override { return total_deviation_; }

    Step uniform_band_start(Step i_h, double band) const override {
        return band_start_from_total_deviation(i_h, band, total_deviation_);
    }

protected:
    void extend(std::vector<double>& out, Step target) override {
        while (static_cast<Step>(out.size()) < target) {
            double r = 0.0;
            for (std::size_t s = 0; s < dist_.size(); ++s) r += dist_[s] * rho_[s];
            out.push_back(r);
            dist_ = advance_distribution(dist_);
        }
    }

private:
    std::vector<double> advance_distribution(const std::vector<double>& d) const {
        std::vector<double> next(d.size(), 0.0);
        for (std::size_t s = 0; s < d.size(); ++s) {
            if (d[s] == 0.0) continue;
            for (std::size_t t = 0; t < d.size(); ++t) next[t] += d[s] * chain_[s][t];
        }
        return next;
    }

    mdp::Matrix chain_;
    std::vector<double> rho_;
    std::vector<double> dist_;  // distribution at the next unmaterialized step
    double total_deviation_ = 0.0;
};

// Recurrent class of the optimal chain that the recovery policy steers into:
// chosen as the highest-gain recurrent class (ties toward lower state index).
std::vector<bool> recovery_target_set(const mdp::Matrix& chain) {
    const int n = static_cast<int>(chain.size());
    // Recurrent classes = strongly connected components without outgoing
    // edges. n is small; the quadratic pairwise-reachability check keeps it
    // simple.
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int s = 0; s < n; ++s) {
        std::queue<int> q;
        q.push(s);
        reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v = 0; v < n; ++v) {
                if (chain[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0.0 &&
                    !reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)]) {
                    reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(v)] = true;
                    q.push(v);
                }
            }
        }
    }
    std::vector<int> component(static_cast<std::size_t>(n), -1);
    int n_components = 0;
    for (int s = 0; s < n; ++s) {
        if (component[static_cast<std::size_t>(s)] >= 0) continue;
        int c = n_components++;
        for (int t = s; t < n; ++t) {
            if (reach[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] &&
                reach[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)]) {
                component[static_cast<std::size_t>(t)] = c;
            }
        }
    }
    std::vector<bool> closed(static_cast<std::size_t>(n_components), true);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (chain[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] > 0.0 &&
                component[static_cast<std::size_t>(s)] != component[static_cast<std::size_t>(t)]) {
                closed[static_cast<std::size_t>(component[static_cast<std::size_t>(s)])] = false;
            }
        }
    }
    // All closed classes of an optimality-equation solution share the optimal
    // gain (within tolerance); pick the first closed class.
    int chosen = -1;
    for (int s = 0; s < n && chosen < 0; ++s) {
        if (closed[static_cast<std::size_t>(component[static_cast<std::size_t>(s)])]) {
            chosen = component[static_cast<std::size_t>(s)];
        }
    }
    std::vector<bool> target(static_cast<std::size_t>(n), false);
    for (int s = 0; s < n; ++s) {
        target[static_cast<std::size_t>(s)] = component[static_cast<std::size_t>(s)] == chosen;
    }
    return target;
}

// Minimum expected steps to the target set, with the minimizing action per
// state (shortest stochastic path, unit costs).
struct SspSolution {
    std::vector<double> steps_to_target;
    std::vector<int> action;
};

SspSolution solve_ssp(const mdp::FiniteMdp& m, const std::vector<bool>& target) {
    const int n = m.n_states;
    SspSolution out;
    out.steps_to_target.assign(static_cast<std::size_t>(n), 0.0);
    out.action.assign(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 1000000; ++iter) {
        double change = 0.0;
        std::vector<double> next(static_cast<std::size_t>(n), 0.0);
        for (int s = 0; s < n; ++s) {
            if (target[static_cast<std::size_t>(s)]) continue;
            double best = std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (int a = 0; a < m.n_actions; ++a) {
                double v = 1.0;
                const auto& row = m.transition[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)];
                for (int t = 0; t < n; ++t) {
                    if (!target[static_cast<std::size_t>(t)]) {
                        v += row[static_cast<std::size_t>(t)] *
                             out.steps_to_target[static_cast<std::size_t>(t)];
                    }
                }
                if (v < best) {
                    best = v;
                    best_a = a;
                }
            }
            next[static_cast<std::size_t>(s)] = best;
            out.action[static_cast<std::size_t>(s)] = best_a;
            change = std::max(change, std::abs(best - out.steps_to_target[static_cast<std::size_t>(s)]));
        }
        for (int s = 0; s < n; ++s) {
            if (!target[static_cast<std::size_t>(s)]) {
                out.steps_to_target[static_cast<std::size_t>(s)] = next[static_cast<std::size_t>(s)];
            }
        }
        if (change < 1e-12) return out;
    }
    throw std::runtime_error("recovery reach computation did not converge");
}

}  // namespace

mdp::FiniteMdp to_finite_mdp(const MdpEnvironmentSpec& spec) {
    validate_spec(spec);
    mdp::FiniteMdp m;
    m.n_states = spec.n_states;
    m.n_actions = spec.n_actions;
    auto ns = static_cast<std::size_t>(spec.n_states);
    auto na = static_cast<std::size_t>(spec.n_actions);
    m.transition.assign(na, mdp::Matrix(ns, std::vector<double>(ns, 0.0)));
    m.reward.assign(na, mdp::Matrix(ns, std::vector<double>(ns, 0.0)));
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            for (const auto& outcome : spec.outcomes[s][a]) {
                auto t = static_cast<std::size_t>(outcome.next_state);
                m.transition[a][s][t] += outcome.probability;
                m.reward[a][s][t] += outcome.probability * to_double(outcome.reward);
            }
            for (std::size_t t = 0; t < ns; ++t) {
                if (m.transition[a][s][t] > 0.0) {
                    m.reward[a][s][t] /= m.transition[a][s][t];  // conditional mean
                }
            }
        }
    }
    return m;
}

EnvironmentBundle make_mdp_environment(const MdpEnvironmentSpec& spec) {
    auto finite = to_finite_mdp(spec);  // validates
    auto ergodic = mdp::check_ergodic(finite);
    if (!ergodic.ergodic) {
        throw NonErgodicError(ergodic.witness_from, ergodic.witness_to,
                              "mdp environment '" + spec.name +
                                  "' is not ergodic: no path from state " +
                                  std::to_string(ergodic.witness_from) + " to state " +
                                  std::to_string(ergodic.witness_to));
    }

    auto env = std::make_shared<MdpEnvironment>(spec);
    auto solution = mdp::solve_average_reward(finite);
    auto chain = mdp::policy_chain(finite, solution.policy);
    auto rho = mdp::policy_expected_rewards(finite, solution.policy);
    double r_max = to_double(env->reward_bound());

    auto target = recovery_target_set(chain);
    auto ssp = solve_ssp(finite, target);
    double worst_reach = 0.0;
    for (double v : ssp.steps_to_target) worst_reach = std::max(worst_reach, v);
    // Constant catch-up offset: every reachable state rejoins the optimal
    // class within worst_reach expected steps, each costing at most r_max.
    double c_nu = r_max * std::ceil(worst_reach + 1e-9);
    if (c_nu < 1e-12) c_nu = 0.0;

    // Mixing surrogate of the optimal chain -> exponential phi constants.
    double gamma;
    {
        auto pi = mdp::unichain_stationary(chain);
        const std::size_t n = chain.size();
        mdp::Matrix power = chain;
        for (int step = 1; step < 8; ++step) {
            mdp::Matrix next(n, std::vector<double>(n, 0.0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t l = 0; l < n; ++l) next[i][l] += power[i][j] * chain[j][l];
            power = next;
        }
        double tv8 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double tv = 0.0;
            for (std::size_t j = 0; j < n; ++j) tv += std::abs(power[i][j] - pi[j]);
            tv8 = std::max(tv8, 0.5 * tv);
        }
        double lambda = std::pow(std::max(tv8, 1e-12), 1.0 / 8.0);
        lambda = std::clamp(lambda, 1e-6, 0.999);
        gamma = 1.0 - lambda;
    }

    double r2 = std::max(r_max * r_max, 1e-12);
    double phi_scale = 2.0;
    auto phi_fn = [gamma, r2, phi_scale](Step n, double eps) {
        return phi_scale * std::exp(-static_cast<double>(n) * eps * eps * gamma / (4.0 * r2));
    };

    EnvironmentBundle bundle;
    bundle.name = spec.name;
    bundle.environment = env;
    bundle.metadata.optimal_value = solution.gain;
    bundle.metadata.reference = std::make_shared<MdpReferenceRewards>(
        chain, rho, spec.initial_state, solution.gain);
    bundle.metadata.d = DecaySpec::constant(c_nu);
    bundle.metadata.phi = {phi_fn,
                           exp_sqrt_series_bound(phi_scale,
                                                 spec.eps0 * spec.eps0 * gamma / (4.0 * r2))};
    bundle.metadata.epsilon_schedule = polynomial_epsilon_schedule(spec.eps0);

    // Reach-then-follow: steer to the optimal class along minimal expected
    // hitting paths, then follow the optimal stationary policy.
    auto policy = solution.policy;
    auto reach_action = ssp.action;
    int initial_state = spec.initial_state;
    int n_states = spec.n_states;
    bundle.metadata.recovery = [policy, reach_action, target, initial_state,
                                n_states](const History&) -> std::unique_ptr<Policy> {
        return make_policy([policy, reach_action, target, initial_state,
                            n_states](const History& h) {
            int state = initial_state;
            if (!h.empty()) {
                int obs = h.percept(h.length()).observation;
                if (obs >= 0 && obs < n_states) state = obs;
            }
            auto s = static_cast<std::size_t>(state);
            return Action{target[s] ? policy[s] : reach_action[s]};
        });
    };

    // Structured adversary: hammer the action with the lowest expected reward
    // averaged over states.
    int worst_action = 0;
    {
        double worst_value = std::numeric_limits<double>::infinity();
        for (int a = 0; a < finite.n_actions; ++a) {
            double total = 0.0;
            for (int s = 0; s < finite.n_states; ++s) total += finite.expected_reward(s, a);
            if (total < worst_value) {
                worst_value = total;
                worst_action = a;
            }
        }
    }
    bundle.worst_prefix = [worst_action](Step length, RandomSource&) {
        return std::vector<Action>(static_cast<std::size_t>(length), Action{worst_action});
    };
    return bundle;
}

}  // namespace selfopt::envs
