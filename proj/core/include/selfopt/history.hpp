#pragma once

#include <cstdint>
#include <vector>

#include "selfopt/types.hpp"

namespace selfopt {

// Append-only interaction record z_1 z_2 ... with z_i = (y_i, x_i). Steps are
// 1-based everywhere to match the interaction protocol. Recorded entries are
// immutable; the structure maintains exact reward prefix sums so that window
// sums over [k, k+n] cost O(1).
class History {
public:
    History() { reward_prefix_.push_back(Rational(0)); }

    void append(Action action, const Percept& percept) {
        actions_.push_back(action);
        percepts_.push_back(percept);
        reward_prefix_.push_back(reward_prefix_.back() + percept.reward);
    }

    Step length() const { return static_cast<Step>(actions_.size()); }
    bool empty() const { return actions_.empty(); }

    // 1-based accessors.
    Action action(Step i) const { return actions_.at(static_cast<std::size_t>(i - 1)); }
    const Percept& percept(Step i) const { return percepts_.at(static_cast<std::size_t>(i - 1)); }

    // Exact sum of rewards over steps [first, last], both inclusive.
    Rational reward_range_sum(Step first, Step last) const;

    Rational total_reward() const { return reward_prefix_.back(); }

private:
    std::vector<Action> actions_;
    std::vector<Percept> percepts_;
    std::vector<Rational> reward_prefix_;
};

// Sum of rewards r_k + ... + r_{k+n} (window of n+1 steps starting at k).
// Errors if the window exceeds the recorded history.
Rational reward_sum(const History& h, Step k, Step n);

}  // namespace selfopt
