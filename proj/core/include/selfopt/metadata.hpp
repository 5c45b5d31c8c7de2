#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "selfopt/policy.hpp"
#include "selfopt/types.hpp"

namespace selfopt {

// Declared catch-up offset d(k, eps). The closed forms cover every shipped
// family and admit exact inversion of the horizon inequalities; `custom` is
// for user-supplied metadata and falls back to probe search.
struct DecaySpec {
    enum class Form { zero, constant, sqrt_k, linear_k, custom };

    Form form = Form::zero;
    double scale = 0.0;
    std::function<double(Step k, double eps)> custom_fn;

    double operator()(Step k, double eps) const;

    // Smallest m >= 1 such that d(m', eps) / m' <= bound for every m' >= m,
    // or nullopt if no such m exists (e.g. linear d with bound below scale).
    std::optional<Step> uniform_ratio_start(double eps, double bound) const;

    static DecaySpec zero() { return {Form::zero, 0.0, nullptr}; }
    static DecaySpec constant(double c) { return {Form::constant, c, nullptr}; }
    static DecaySpec sqrt_k(double scale = 1.0) { return {Form::sqrt_k, scale, nullptr}; }
    static DecaySpec linear_k(double scale = 1.0) { return {Form::linear_k, scale, nullptr}; }
    static DecaySpec custom(std::function<double(Step, double)> fn) {
        return {Form::custom, 0.0, std::move(fn)};
    }
};

// Reference reward sequence r_1, r_2, ... of an environment: the expected
// rewards of its declared optimal/reference policy. Values are materialized
// lazily into a shared prefix-sum cache (thread safe; metadata objects are
// shared across parallel runs). Subclasses additionally declare an analytic
// deviation budget used to invert the horizon inequalities without scanning.
class ReferenceRewards {
public:
    virtual ~ReferenceRewards() = default;

    // Limit of the running mean; equals the environment's optimal value.
    double limit() const { return limit_; }

    double reward(Step i);                 // r_i, 1-based
    double prefix_sum(Step n);             // r_1 + ... + r_n
    double range_sum(Step first, Step last);  // inclusive window sum
    double range_mean(Step first, Step last);

    // Nondecreasing upper bound on sum_{i <= m} |r_i - limit|, valid for all
    // m including values never materialized.
    virtual double deviation_budget(Step m) const = 0;

    // Smallest k2 > 2*i_h such that |mean of r_{i_h+1..m} - limit| <= band
    // holds for every m > k2. Guaranteed analytically via the budget.
    virtual Step uniform_band_start(Step i_h, double band) const = 0;

protected:
    explicit ReferenceRewards(double limit) : limit_(limit) {}
    // Append rewards for steps cached+1 .. target to `out`. Called under the
    // cache lock; implementations may keep sequential iteration state.
    virtual void extend(std::vector<double>& out, Step target) = 0;

private:
    void ensure(Step n);

    double limit_;
    mutable std::mutex mutex_;
    std::vector<double> rewards_;
    std::vector<double> prefix_;  // prefix_[i] = r_1 + ... + r_i
};

// Helper for families whose total deviation sum_i |r_i - limit| is finite:
// the band start inverts in closed form.
Step band_start_from_total_deviation(Step i_h, double band, double total_deviation);

// Tail probability phi(n, eps) together with the declared bound on the series
// sum_n phi(n, epsilon_schedule(n)).
struct TailProbability {
    std::function<double(Step n, double eps)> fn;
    double series_bound = 0.0;
    double operator()(Step n, double eps) const { return fn(n, eps); }
};

using EpsilonSchedule = std::function<double(Step n)>;
using RecoveryPolicyFactory = std::function<std::unique_ptr<Policy>(const History&)>;

// eps_n = eps0 * n^{-1/4}: decays slowly enough that exponential phi tails
// stay summable along the schedule.
EpsilonSchedule polynomial_epsilon_schedule(double eps0);

// Declared bound for sum_{n>=1} scale * exp(-c * sqrt(n)).
double exp_sqrt_series_bound(double scale, double c);

// Everything the agent and the certifier may use about an environment beyond
// its conditional measure: the self-declared stability certificate.
struct ValueStabilityMetadata {
    double optimal_value = 0.0;
    std::shared_ptr<ReferenceRewards> reference;
    DecaySpec d;
    TailProbability phi;
    EpsilonSchedule epsilon_schedule;
    RecoveryPolicyFactory recovery;
};

// First n reference rewards, materialized.
std::vector<double> reference_reward_prefix(const ValueStabilityMetadata& meta, Step n);

}  // namespace selfopt
