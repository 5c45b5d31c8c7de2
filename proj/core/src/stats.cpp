#include "selfopt/stats.hpp"

#include <algorithm>
#include <string>

#include "selfopt/errors.hpp"

namespace selfopt {

AverageValueEstimates average_value_estimates(const std::vector<double>& rewards,
                                              std::size_t m) {
    if (m < 1 || m > rewards.size()) {
        throw ConfigError("average_value_estimates: m = " + std::to_string(m) +
                          " outside [1, " + std::to_string(rewards.size()) + "]");
    }
    AverageValueEstimates est;
    est.running.resize(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sum += rewards[i];
        est.running[i] = sum / static_cast<double>(i + 1);
    }
    est.suffix_inf.resize(m);
    est.suffix_sup.resize(m);
    double lo = est.running[m - 1];
    double hi = est.running[m - 1];
    for (std::size_t i = m; i-- > 0;) {
        lo = std::min(lo, est.running[i]);
        hi = std::max(hi, est.running[i]);
        est.suffix_inf[i] = lo;
        est.suffix_sup[i] = hi;
    }
    return est;
}

}  // namespace selfopt
