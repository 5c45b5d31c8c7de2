#include "selfopt/metadata.hpp"

#include <cmath>
#include <stdexcept>

#include "selfopt/errors.hpp"

namespace selfopt {

namespace {
// Relative boundary tolerance for threshold inequalities; see horizons.hpp.
constexpr double kBoundaryTol = 1e-12;
}  // namespace

double DecaySpec::operator()(Step k, double eps) const {
    switch (form) {
        case Form::zero: return 0.0;
        case Form::constant: return scale;
        case Form::sqrt_k: return scale * std::sqrt(static_cast<double>(k));
        case Form::linear_k: return scale * static_cast<double>(k);
        case Form::custom:
            if (!custom_fn) throw ConfigError("custom DecaySpec without a function");
            return custom_fn(k, eps);
    }
    throw std::logic_error("unreachable DecaySpec form");
}

std::optional<Step> DecaySpec::uniform_ratio_start(double eps, double bound) const {
    if (bound <= 0.0) return std::nullopt;
    auto holds = [&](Step m) {
        return (*this)(m, eps) <= static_cast<double>(m) * bound * (1.0 + kBoundaryTol);
    };
    switch (form) {
        case Form::zero:
            return Step{1};
        case Form::constant:
        case Form::sqrt_k: {
            // d(m)/m is nonincreasing for both forms: find the first holder.
            double est = form == Form::constant ? scale / bound
                                                : (scale / bound) * (scale / bound);
            Step from = static_cast<Step>(std::floor(est)) - 2;
            if (from < 1) from = 1;
            for (Step m = from; m < from + 8; ++m) {
                if (holds(m)) return m;
            }
            // Fall through for extreme magnitudes: doubling search.
            Step m = from;
            while (m < (Step{1} << 60) && !holds(m)) m *= 2;
            if (!holds(m)) return std::nullopt;
            Step lo = m / 2, hi = m;
            while (lo + 1 < hi) {
                Step mid = lo + (hi - lo) / 2;
                (holds(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        case Form::linear_k:
            if (scale <= bound * (1.0 + kBoundaryTol)) return Step{1};
            return std::nullopt;  // d(m)/m never drops below the bound
        case Form::custom: {
            // No analytic structure: doubling probe, then demand stability on
            // a sparse forward grid. Heuristic by design for user metadata.
            Step m = 1;
            while (m < (Step{1} << 40) && !holds(m)) m *= 2;
            if (!holds(m)) return std::nullopt;
            for (Step probe = m; probe < m * 1024; probe *= 2) {
                if (!holds(probe)) return std::nullopt;
            }
            return m;
        }
    }
    throw std::logic_error("unreachable DecaySpec form");
}

void ReferenceRewards::ensure(Step n) {
    if (n <= static_cast<Step>(rewards_.size())) return;
    extend(rewards_, n);
    if (static_cast<Step>(rewards_.size()) < n) {
        throw std::logic_error("ReferenceRewards::extend produced too few values");
    }
    prefix_.reserve(rewards_.size() + 1);
    if (prefix_.empty()) prefix_.push_back(0.0);
    for (std::size_t i = prefix_.size(); i <= rewards_.size(); ++i) {
        prefix_.push_back(prefix_[i - 1] + rewards_[i - 1]);
    }
}

double ReferenceRewards::reward(Step i) {
    if (i < 1) throw ConfigError("reference reward index must be >= 1");
    std::lock_guard<std::mutex> lock(mutex_);
    ensure(i);
    return rewards_[static_cast<std::size_t>(i - 1)];
}

double ReferenceRewards::prefix_sum(Step n) {
    if (n < 0) throw ConfigError("reference prefix length must be >= 0");
    std::lock_guard<std::mutex> lock(mutex_);
    ensure(n);
    return prefix_[static_cast<std::size_t>(n)];
}

double ReferenceRewards::range_sum(Step first, Step last) {
    if (first < 1 || last < first) throw ConfigError("bad reference reward window");
    std::lock_guard<std::mutex> lock(mutex_);
    ensure(last);
    return prefix_[static_cast<std::size_t>(last)] - prefix_[static_cast<std::size_t>(first - 1)];
}

double ReferenceRewards::range_mean(Step first, Step last) {
    return range_sum(first, last) / static_cast<double>(last - first + 1);
}

Step band_start_from_total_deviation(Step i_h, double band, double total_deviation) {
    // |mean over (i_h, m] - limit| <= D / (m - i_h): inverted with the usual
    // boundary tolerance, then clamped to the structural floor 2*i_h + 1.
    Step gap = 1;
    if (total_deviation > 0.0) {
        double est = total_deviation / band;
        gap = static_cast<Step>(std::floor(est)) - 2;
        if (gap < 1) gap = 1;
        while (total_deviation > static_cast<double>(gap) * band * (1.0 + 1e-12)) ++gap;
    }
    // The first window length satisfying the bound is `gap`, so every m
    // strictly beyond i_h + gap - 1 holds.
    Step k2 = i_h + gap - 1;
    if (k2 < 2 * i_h + 1) k2 = 2 * i_h + 1;
    return k2;
}

EpsilonSchedule polynomial_epsilon_schedule(double eps0) {
    if (eps0 <= 0.0) throw ConfigError("epsilon schedule requires eps0 > 0");
    return [eps0](Step n) {
        return eps0 * std::pow(static_cast<double>(n < 1 ? 1 : n), -0.25);
    };
}

double exp_sqrt_series_bound(double scale, double c) {
    if (c <= 0.0) throw ConfigError("series bound requires exponent c > 0");
    // sum_{n>=1} exp(-c sqrt(n)) <= 1 + integral_0^inf exp(-c sqrt(x)) dx
    //                             = 1 + 2/c^2.
    return scale * (1.0 + 2.0 / (c * c));
}

std::vector<double> reference_reward_prefix(const ValueStabilityMetadata& meta, Step n) {
    if (!meta.reference) throw ConfigError("metadata lacks a reference reward sequence");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Step i = 1; i <= n; ++i) out.push_back(meta.reference->reward(i));
    return out;
}

}  // namespace selfopt
