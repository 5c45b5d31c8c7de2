#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace selfopt {

// Exact reward arithmetic. All shipped environment families emit rewards with
// small denominators, so cumulative sums stay well inside int64 range.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
    return Rational(num, den);
}

// Exact decimal rendering when the denominator is of the form 2^a * 5^b,
// otherwise a fixed-precision fallback. Used by the CSV writers so that
// identical runs serialize byte-identically.
std::string decimal_string(const Rational& q);

}  // namespace selfopt
