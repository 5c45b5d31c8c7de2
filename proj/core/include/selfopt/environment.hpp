#pragma once

#include <memory>
#include <string>

#include "selfopt/history.hpp"
#include "selfopt/random.hpp"
#include "selfopt/types.hpp"

namespace selfopt {

// A (possibly history dependent) conditional probability measure over
// percepts, nu(x_i | z_<i, y_i). Implementations expose an incremental cursor
// so that per-step conditional queries along a growing shared history cost
// O(1); evaluating against an arbitrary history replays it from the start.
class EnvironmentModel {
public:
    // Incremental evaluation state positioned after some history prefix.
    class Cursor {
    public:
        virtual ~Cursor() = default;
        // Distribution over the next percept given the pending action.
        virtual PerceptDistribution distribution(Action action) const = 0;
        // Absorb one realized step. The percept need not be in the support;
        // likelihood accounting handles zero-probability continuations.
        virtual void advance(Action action, const Percept& percept) = 0;
        virtual std::unique_ptr<Cursor> clone() const = 0;
    };

    virtual ~EnvironmentModel() = default;

    virtual const std::string& name() const = 0;
    virtual const Alphabet& action_alphabet() const = 0;
    virtual const Alphabet& observation_alphabet() const = 0;
    // Upper bound r_max on any reward this model can emit.
    virtual Rational reward_bound() const = 0;

    // Fresh cursor at the empty history.
    virtual std::unique_ptr<Cursor> cursor() const = 0;
};

// Cursor positioned after the given history (replayed from the start).
std::unique_ptr<EnvironmentModel::Cursor> cursor_at(const EnvironmentModel& env,
                                                    const History& h);

// nu( . | z_<i, y) for the full recorded history; O(length) per call.
PerceptDistribution conditional_percept_distribution(const EnvironmentModel& env,
                                                     const History& h, Action action);

// Probability assigned to a specific percept by a finite-support distribution.
double probability_of(const PerceptDistribution& dist, const Percept& percept);

// Deterministic inverse-CDF draw from a finite-support distribution.
Percept sample_percept(const PerceptDistribution& dist, RandomSource& rng);

// Throws ConfigError unless the distribution is normalized within 1e-12 and
// has nonnegative weights.
void check_normalized(const PerceptDistribution& dist, const std::string& context);

}  // namespace selfopt
