#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "selfopt/certify/certify.hpp"
#include "selfopt/errors.hpp"

namespace selfopt::certify {

namespace {

std::string fmt(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", x);
    return buffer;
}

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    auto n = static_cast<Step>(sorted.size());
    Step rank = static_cast<Step>(std::ceil(q * static_cast<double>(n))) - 1;
    rank = std::clamp<Step>(rank, 0, n - 1);
    return sorted[static_cast<std::size_t>(rank)];
}

LossStats stats_from(std::vector<double> losses) {
    LossStats out;
    if (losses.empty()) return out;
    double total = 0.0;
    for (double x : losses) total += x;
    out.mean = total / static_cast<double>(losses.size());
    std::sort(losses.begin(), losses.end());
    out.p50 = quantile(losses, 0.50);
    out.p90 = quantile(losses, 0.90);
    out.p99 = quantile(losses, 0.99);
    out.max = losses.back();
    return out;
}

// One adversarial prefix + recovery rollout; returns the window loss
// (reference sum minus realized sum over steps k..k+n).
double run_trial(const envs::EnvironmentBundle& bundle, Step k, Step n,
                 const AdversaryStrategy& adversary, std::uint64_t trial_seed,
                 double ref_sum) {
    const auto& env = *bundle.environment;
    RandomSource rng(trial_seed);
    auto actions = adversary.generate(env, k - 1, rng);
    if (static_cast<Step>(actions.size()) != k - 1) {
        throw std::logic_error("adversary returned a prefix of the wrong length");
    }

    History h;
    auto cursor = env.cursor();
    auto n_actions = static_cast<int>(env.action_alphabet().labels.size());
    for (Action a : actions) {
        if (a.id < 0 || a.id >= n_actions) {
            throw std::logic_error("adversary emitted an action outside the alphabet");
        }
        Percept percept = sample_percept(cursor->distribution(a), rng);
        cursor->advance(a, percept);
        h.append(a, percept);
    }

    auto policy = bundle.metadata.recovery(h);
    for (Step t = k; t <= k + n; ++t) {
        Action a = policy->act(h);
        if (a.id < 0 || a.id >= n_actions) {
            throw std::logic_error("recovery policy emitted an action outside the alphabet");
        }
        Percept percept = sample_percept(cursor->distribution(a), rng);
        cursor->advance(a, percept);
        h.append(a, percept);
    }
    double realized = to_double(h.reward_range_sum(k, k + n));
    return ref_sum - realized;
}

std::vector<double> run_trials(const envs::EnvironmentBundle& bundle, Step k, Step n,
                               Step trials, std::uint64_t base_seed,
                               const AdversaryStrategy& adversary) {
    if (k < 1 || n < 0 || trials < 1) {
        throw ConfigError("certification cell needs k >= 1, n >= 0, trials >= 1");
    }
    double ref_sum = bundle.metadata.reference->range_sum(k, k + n);
    std::vector<double> losses;
    losses.reserve(static_cast<std::size_t>(trials));
    for (Step t = 0; t < trials; ++t) {
        losses.push_back(run_trial(bundle, k, n, adversary,
                                   derive_seed(base_seed, static_cast<std::uint64_t>(t)),
                                   ref_sum));
    }
    return losses;
}

}  // namespace

AdversaryStrategy random_uniform_adversary() {
    return {"random",
            [](const EnvironmentModel& env, Step length, RandomSource& rng) {
                auto n = static_cast<std::uint64_t>(env.action_alphabet().labels.size());
                std::vector<Action> actions;
                actions.reserve(static_cast<std::size_t>(length));
                for (Step i = 0; i < length; ++i) {
                    actions.push_back(Action{static_cast<int>(rng.below(n))});
                }
                return actions;
            }};
}

AdversaryStrategy worst_declared_adversary(const envs::EnvironmentBundle& bundle) {
    if (!bundle.worst_prefix) {
        auto fallback = random_uniform_adversary();
        fallback.name = "worst-declared(random)";
        return fallback;
    }
    auto hook = bundle.worst_prefix;
    return {"worst-declared", [hook](const EnvironmentModel&, Step length, RandomSource& rng) {
                return hook(length, rng);
            }};
}

CertificationReport certify_value_stability(const envs::EnvironmentBundle& bundle,
                                            const std::vector<CertifyCell>& grid,
                                            const std::vector<AdversaryStrategy>& adversaries,
                                            Step trials, std::uint64_t seed) {
    if (adversaries.empty()) throw ConfigError("certification needs at least one adversary");
    CertificationReport report;
    report.environment = bundle.name;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const auto& cell = grid[c];
        for (std::size_t a = 0; a < adversaries.size(); ++a) {
            std::uint64_t base = derive_seed(
                seed, static_cast<std::uint64_t>(c) * adversaries.size() + a + 1);
            auto losses = run_trials(bundle, cell.k, cell.n, trials, base, adversaries[a]);

            CellResult result;
            result.cell = cell;
            result.adversary = adversaries[a].name;
            result.trials = trials;
            result.threshold =
                bundle.metadata.d(cell.k, cell.eps) + static_cast<double>(cell.n) * cell.eps;
            for (double loss : losses) {
                if (loss > result.threshold + 1e-9) ++result.violations;
            }
            result.violation_frequency =
                static_cast<double>(result.violations) / static_cast<double>(trials);
            result.phi_bound = bundle.metadata.phi(cell.n, cell.eps);
            double p = std::clamp(result.phi_bound, 0.0, 1.0);
            result.slack = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
            result.pass = result.violation_frequency <= result.phi_bound + result.slack;
            result.loss = stats_from(std::move(losses));
            report.all_pass = report.all_pass && result.pass;
            report.cells.push_back(std::move(result));
        }
    }
    return report;
}

LossStats estimate_recovery_loss(const envs::EnvironmentBundle& bundle, Step k, Step n,
                                 Step trials, std::uint64_t seed,
                                 const AdversaryStrategy& adversary,
                                 std::vector<double>* raw_losses) {
    auto losses = run_trials(bundle, k, n, trials, derive_seed(seed, 0), adversary);
    if (raw_losses) *raw_losses = losses;
    return stats_from(std::move(losses));
}

void write_report_csv(const CertificationReport& report, std::ostream& out) {
    out << "environment,adversary,k,n,eps,trials,violations,violation_frequency,"
           "phi,slack,pass,threshold,loss_mean,loss_p50,loss_p90,loss_p99,loss_max\n";
    for (const auto& r : report.cells) {
        out << report.environment << ',' << r.adversary << ',' << r.cell.k << ','
            << r.cell.n << ',' << fmt(r.cell.eps) << ',' << r.trials << ','
            << r.violations << ',' << fmt(r.violation_frequency) << ','
            << fmt(r.phi_bound) << ',' << fmt(r.slack) << ','
            << (r.pass ? "true" : "false") << ',' << fmt(r.threshold) << ','
            << fmt(r.loss.mean) << ',' << fmt(r.loss.p50) << ',' << fmt(r.loss.p90)
            << ',' << fmt(r.loss.p99) << ',' << fmt(r.loss.max) << '\n';
    }
}

void print_report(const CertificationReport& report, std::ostream& out) {
    out << "certification of '" << report.environment << "'\n";
    for (const auto& r : report.cells) {
        out << (r.pass ? "  [PASS] " : "  [FAIL] ") << "k=" << r.cell.k
            << " n=" << r.cell.n << " eps=" << fmt(r.cell.eps) << " adv=" << r.adversary
            << " violations=" << r.violations << "/" << r.trials
            << " bound=" << fmt(r.phi_bound + r.slack)
            << " loss[p50=" << fmt(r.loss.p50) << " p99=" << fmt(r.loss.p99)
            << " max=" << fmt(r.loss.max) << "]\n";
    }
    out << (report.all_pass ? "  all cells pass\n" : "  REFUTED: some cell fails\n");
}

}  // namespace selfopt::certify
