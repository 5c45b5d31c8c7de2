#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "selfopt/rational.hpp"

namespace selfopt {

// Actions and observations are indices into finite alphabets; the alphabet
// carries the display labels used in serialized trajectories.
struct Action {
    int id = 0;
    friend bool operator==(const Action&, const Action&) = default;
};

struct Alphabet {
    std::vector<std::string> labels;
    int size() const { return static_cast<int>(labels.size()); }
    const std::string& label(int id) const { return labels.at(static_cast<std::size_t>(id)); }
};

inline Alphabet trivial_observation_alphabet() { return Alphabet{{"-"}}; }

// One percept: reward paired with an observation symbol. Rewards are exact
// rationals in [0, r_max]; statistics convert to double at the edges.
struct Percept {
    Rational reward;
    int observation = 0;
    friend bool operator==(const Percept&, const Percept&) = default;
};

struct WeightedPercept {
    Percept percept;
    double probability = 0.0;
};

// Finite-support conditional distribution over percepts.
using PerceptDistribution = std::vector<WeightedPercept>;

using Step = std::int64_t;

}  // namespace selfopt
