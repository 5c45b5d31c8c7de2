#pragma once

#include "selfopt/metadata.hpp"
#include "selfopt/types.hpp"

namespace selfopt::agent {

// The horizon inequalities are specified over exact reals but evaluated on
// doubles; the frozen expected values assume exact-decimal inputs (e.g.
// 2/160 < 0.1/8 must count as false). These helpers therefore resolve the
// thresholds with a 1e-12 relative boundary tolerance.

// Smallest k >= 1 with numerator <= k * per_k (non-strict).
Step smallest_k_non_strict(double numerator, double per_k);
// Smallest k >= 1 with numerator < k * per_k (strict).
Step smallest_k_strict(double numerator, double per_k);

struct HorizonParams {
    Step k_cap = 10'000'000;   // give up past this exploration start
    Step m_cap = 1'000'000;    // reference prefix cache / probe ceiling
};

// Everything fixed by one pass through the preparation block.
struct Horizons {
    Step i_h = 0;    // step at which preparation ran
    Step k1 = 0;     // optimal-value dilution bound
    Step k2 = 0;     // uniform band start of nu_t's reference means
    Step k3 = 0;     // exploration-length dilution bound
    Step k4 = 0;     // catch-up offsets negligible from here on
    Step k = 0;      // exploration start: separation holds on [k, 3k]
};

// Computes k1..k4 and the exploration start k for the pair (nu_t, nu_e) at
// step i_h with the current attempt counter h and scalars eps/delta:
//   k1: i_h/k1 * V*_t <= eps/8
//   k2: |mean of r^t over (i_h, m]  -  V*_t| <= eps/8 for all m > k2, k2 > 2 i_h
//   k3: h * r_max / k3 < eps/8
//   k4: d_e(m, eps/4)/m, d_t(m, eps/8)/m, d_t(i_h, eps/8)/m all <= eps/8
//       for all m > k4
//   k : smallest k > max(k1..k4) with mean of r^e over [k, 3k] at least
//       delta above mean of r^t over [k, 3k]; verified directly against the
//       cached reference sums while 3k <= m_cap, by the analytic deviation
//       budgets beyond.
// Throws HorizonSearchError when the separation (or a k4 condition) cannot be
// met under the cap.
Horizons prepare_exploration(const ValueStabilityMetadata& nu_t,
                             const ValueStabilityMetadata& nu_e,
                             std::size_t nu_t_index, std::size_t nu_e_index,
                             Step i_h, Step h, double eps, double delta,
                             double r_max, const HorizonParams& params);

}  // namespace selfopt::agent
