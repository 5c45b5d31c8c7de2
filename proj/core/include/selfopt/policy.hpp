#pragma once

#include <memory>

#include "selfopt/history.hpp"
#include "selfopt/types.hpp"

namespace selfopt {

// Deterministic total policy: a pure function of the recorded history.
// Implementations may memoize derived state for the longest prefix they have
// already seen (histories only grow within a run), but the emitted action must
// depend on the history content alone.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Action act(const History& h) = 0;
};

// Policy defined by a plain function of the history.
template <typename F>
class FunctionPolicy final : public Policy {
public:
    explicit FunctionPolicy(F f) : f_(std::move(f)) {}
    Action act(const History& h) override { return f_(h); }

private:
    F f_;
};

template <typename F>
std::unique_ptr<Policy> make_policy(F f) {
    return std::make_unique<FunctionPolicy<F>>(std::move(f));
}

inline std::unique_ptr<Policy> constant_policy(Action a) {
    return make_policy([a](const History&) { return a; });
}

}  // namespace selfopt
