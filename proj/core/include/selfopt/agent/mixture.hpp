#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "selfopt/agent/class_spec.hpp"

namespace selfopt::agent {

// Per-member cumulative log-likelihoods along the shared interaction history,
// and the induced posterior-style ratios nu(z)/xi(z) with
// xi(z) = sum_nu w_nu nu(z). Likelihoods are kept in log domain with a -inf
// sentinel for members that assigned probability zero to some realized step;
// ratios are reconstructed through a max-shifted log-sum-exp, so the identity
// sum_nu w_nu ratio_nu = 1 holds to float accuracy whenever any member is
// still alive. Policy factors cancel from the ratios and are never tracked.
class MixtureState {
public:
    explicit MixtureState(const ClassSpec& cls);

    // Absorb one realized step (updates every member's evaluation cursor).
    void update(Action action, const Percept& percept);

    Step steps() const { return steps_; }
    std::size_t size() const { return log_lik_.size(); }

    // log nu_i(z), -inf if the member died.
    double log_likelihood(std::size_t i) const { return log_lik_.at(i); }
    // log xi(z).
    double log_mixture() const { return log_mixture_; }
    // nu_i(z) / xi(z); 0 for dead members, at most 1/w_i.
    double ratio(std::size_t i) const;
    std::vector<double> ratios() const;

    // Test seam: a state with prescribed log-likelihoods and no cursors.
    static MixtureState from_log_likelihoods(const ClassSpec& cls,
                                             std::vector<double> log_likelihoods);

private:
    void recompute_mixture();

    const ClassSpec* cls_;
    std::vector<std::unique_ptr<EnvironmentModel::Cursor>> cursors_;
    std::vector<double> log_lik_;
    double log_mixture_ = 0.0;
    Step steps_ = 0;
};

// Members whose ratio clears the consistency threshold alpha_s = 2^-s.
std::vector<std::size_t> consistency_set(const MixtureState& mixture, int s);

inline double consistency_threshold(int s) { return std::pow(2.0, -s); }

}  // namespace selfopt::agent
