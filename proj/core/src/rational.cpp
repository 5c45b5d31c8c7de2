#include "selfopt/rational.hpp"

#include <cstdio>

namespace selfopt {

std::string decimal_string(const Rational& q) {
    std::int64_t num = q.numerator();
    std::int64_t den = q.denominator();
    bool negative = num < 0;
    if (negative) num = -num;

    // Factor the denominator as 2^a * 5^b * rest.
    std::int64_t rest = den;
    int twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }

    char buf[64];
    if (rest != 1 || twos > 18 || fives > 18) {
        std::snprintf(buf, sizeof buf, "%.12g", to_double(q));
        return buf;
    }

    // Scale to 10^digits / den exactly.
    int digits = twos > fives ? twos : fives;
    std::int64_t scaled = num;
    for (int i = 0; i < digits - twos; ++i) scaled *= 2;
    for (int i = 0; i < digits - fives; ++i) scaled *= 5;

    std::int64_t pow10 = 1;
    for (int i = 0; i < digits; ++i) pow10 *= 10;
    std::int64_t whole = scaled / pow10;
    std::int64_t frac = scaled % pow10;

    std::string out = negative ? "-" : "";
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(whole));
    out += buf;
    if (digits > 0) {
        std::snprintf(buf, sizeof buf, "%0*lld", digits, static_cast<long long>(frac));
        std::string fraction = buf;
        while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
        if (!fraction.empty()) out += "." + fraction;
    }
    return out;
}

}  // namespace selfopt
