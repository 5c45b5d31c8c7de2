#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace selfopt {

// Invalid configuration or argument detected before any simulation work.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The decision process fed to the average-reward solver is not ergodic; the
// witness names a pair of states with no connecting path.
class NonErgodicError : public std::invalid_argument {
public:
    NonErgodicError(int from, int to, const std::string& msg)
        : std::invalid_argument(msg), witness_from(from), witness_to(to) {}
    int witness_from;
    int witness_to;
};

// The exploration horizon search exhausted its cap without satisfying the
// separation inequality. Carries enough context to diagnose the pairing.
class HorizonSearchError : public std::runtime_error {
public:
    HorizonSearchError(std::size_t nu_t, std::size_t nu_e, std::int64_t k_cap,
                       const std::string& msg)
        : std::runtime_error(msg), nu_t(nu_t), nu_e(nu_e), k_cap(k_cap) {}
    std::size_t nu_t;
    std::size_t nu_e;
    std::int64_t k_cap;
};

}  // namespace selfopt
