#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "selfopt/agent/horizons.hpp"
#include "selfopt/errors.hpp"

namespace selfopt::agent {

namespace {
constexpr double kBoundaryTol = 1e-12;
}

Step smallest_k_non_strict(double numerator, double per_k) {
    if (numerator <= 0.0) return 1;
    if (!(per_k > 0.0)) {
        throw std::invalid_argument("threshold inversion needs a positive slope");
    }
    auto ok = [&](Step k) {
        return numerator <= static_cast<double>(k) * per_k * (1.0 + kBoundaryTol);
    };
    auto k = static_cast<Step>(std::ceil(numerator / per_k * (1.0 - kBoundaryTol)));
    k = std::max<Step>(k, 1);
    while (!ok(k)) ++k;
    while (k > 1 && ok(k - 1)) --k;
    return k;
}

Step smallest_k_strict(double numerator, double per_k) {
    if (numerator < 0.0) return 1;
    if (!(per_k > 0.0)) {
        throw std::invalid_argument("threshold inversion needs a positive slope");
    }
    auto ok = [&](Step k) {
        return numerator < static_cast<double>(k) * per_k * (1.0 - kBoundaryTol);
    };
    auto k = static_cast<Step>(std::ceil(numerator / per_k * (1.0 - kBoundaryTol)));
    k = std::max<Step>(k, 1);
    while (!ok(k)) ++k;
    while (k > 1 && ok(k - 1)) --k;
    return k;
}

Horizons prepare_exploration(const ValueStabilityMetadata& nu_t,
                             const ValueStabilityMetadata& nu_e,
                             std::size_t nu_t_index, std::size_t nu_e_index,
                             Step i_h, Step h, double eps, double delta,
                             double r_max, const HorizonParams& params) {
    if (!(eps > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("exploration preparation needs positive eps and delta");
    }
    if (i_h < 1 || h < 1) {
        throw std::invalid_argument("exploration preparation needs positive i_h and h");
    }

    Horizons out;
    out.i_h = i_h;
    double band = eps / 8.0;

    out.k1 = smallest_k_non_strict(static_cast<double>(i_h) * nu_t.optimal_value, band);
    out.k2 = nu_t.reference->uniform_band_start(i_h, band);
    out.k3 = smallest_k_strict(static_cast<double>(h) * r_max, band);

    // k4: every catch-up offset in the exploration bookkeeping is at most an
    // eps/8 fraction of the window length from here on.
    auto fail_k4 = [&](const char* which) -> HorizonSearchError {
        return HorizonSearchError(
            nu_t_index, nu_e_index, params.k_cap,
            std::string("catch-up offset of ") + which +
                " never falls below the required fraction of the window "
                "(declared d is not o(k) at this precision)");
    };
    auto start_e = nu_e.d.uniform_ratio_start(eps / 4.0, band);
    if (!start_e) throw fail_k4("the explored environment");
    auto start_t = nu_t.d.uniform_ratio_start(band, band);
    if (!start_t) throw fail_k4("the tracked environment");
    Step fixed = smallest_k_non_strict(nu_t.d(i_h, band), band);
    out.k4 = std::max({*start_e - 1, *start_t - 1, fixed - 1, Step{0}});

    // k: first window [k, 3k] past every horizon on which nu_e's reference
    // mean clears nu_t's by delta. Exact prefix sums while the window fits
    // the cache; analytic deviation budgets beyond.
    Step k = std::max({out.k1, out.k2, out.k3, out.k4}) + 1;
    for (; k <= params.k_cap; ++k) {
        double separation;
        if (3 * k <= params.m_cap) {
            double mean_e = nu_e.reference->range_mean(k, 3 * k);
            double mean_t = nu_t.reference->range_mean(k, 3 * k);
            separation = mean_e - mean_t;
        } else {
            double window = static_cast<double>(2 * k + 1);
            double slack = (nu_e.reference->deviation_budget(3 * k) +
                            nu_t.reference->deviation_budget(3 * k)) /
                           window;
            separation = nu_e.optimal_value - nu_t.optimal_value - slack;
        }
        if (separation >= delta - kBoundaryTol * (delta + 1.0)) {
            out.k = k;
            return out;
        }
    }
    throw HorizonSearchError(nu_t_index, nu_e_index, params.k_cap,
                             "no exploration window under the cap separates the "
                             "candidate from the tracked environment");
}

}  // namespace selfopt::agent
