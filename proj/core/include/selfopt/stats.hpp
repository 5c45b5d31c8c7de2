#pragma once

#include <vector>

#include "selfopt/types.hpp"

namespace selfopt {

// Finite-horizon proxies for the upper and lower average values. running[i]
// is the mean of the first i+1 rewards; suffix_inf/suffix_sup[i] give
// inf/sup over running[j] for j >= i, so suffix_inf.front() estimates the
// lower value and suffix_sup.front() the upper value of the realized run.
struct AverageValueEstimates {
    std::vector<double> running;
    std::vector<double> suffix_inf;
    std::vector<double> suffix_sup;
};

// Estimates over the first m rewards of the sequence; m >= 1 and m within
// the sequence length, else ConfigError.
AverageValueEstimates average_value_estimates(const std::vector<double>& rewards,
                                              std::size_t m);

}  // namespace selfopt
