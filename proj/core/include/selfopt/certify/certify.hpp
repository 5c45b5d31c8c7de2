#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "selfopt/envs/families.hpp"

namespace selfopt::certify {

struct CertifyCell {
    Step k = 0;      // conditioning prefix ends before step k
    Step n = 0;      // catch-up window covers steps k .. k+n
    double eps = 0.0;
};

// Generates the adversarial action prefix z_<k (k-1 actions).
struct AdversaryStrategy {
    std::string name;
    std::function<std::vector<Action>(const EnvironmentModel&, Step length, RandomSource&)> generate;
};

AdversaryStrategy random_uniform_adversary();
// The family's declared structured adversary; falls back to random actions
// when the bundle does not declare one.
AdversaryStrategy worst_declared_adversary(const envs::EnvironmentBundle& bundle);

struct LossStats {
    double mean = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
};

struct CellResult {
    CertifyCell cell;
    std::string adversary;
    Step trials = 0;
    Step violations = 0;
    double violation_frequency = 0.0;
    double phi_bound = 0.0;       // declared phi(n, eps)
    double slack = 0.0;           // binomial 3-sigma allowance at phi
    bool pass = false;            // violation_frequency <= phi_bound + slack
    double threshold = 0.0;       // d(k, eps) + n*eps
    LossStats loss;
};

struct CertificationReport {
    std::string environment;
    std::vector<CellResult> cells;
    bool all_pass = true;
};

// Monte-Carlo check of the declared (d, phi) certificate. Per trial: sample
// an adversarial prefix z_<k, roll the declared recovery policy over steps
// k..k+n, and flag a violation when the reference-reward shortfall exceeds
// d(k, eps) + n*eps. A cell passes when the observed violation frequency is
// within the declared phi plus 3-sigma binomial slack (so phi == 0 demands
// zero violations). Cells and trials derive independent seeds from `seed`;
// results do not depend on evaluation order.
CertificationReport certify_value_stability(const envs::EnvironmentBundle& bundle,
                                            const std::vector<CertifyCell>& grid,
                                            const std::vector<AdversaryStrategy>& adversaries,
                                            Step trials, std::uint64_t seed);

// Loss distribution (reference window sum minus realized window sum) of the
// declared recovery policy at one cell under one adversary.
LossStats estimate_recovery_loss(const envs::EnvironmentBundle& bundle, Step k, Step n,
                                 Step trials, std::uint64_t seed,
                                 const AdversaryStrategy& adversary,
                                 std::vector<double>* raw_losses = nullptr);

void write_report_csv(const CertificationReport& report, std::ostream& out);
void print_report(const CertificationReport& report, std::ostream& out);

}  // namespace selfopt::certify
