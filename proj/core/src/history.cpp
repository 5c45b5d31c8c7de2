#include "selfopt/history.hpp"

#include <string>

#include "selfopt/errors.hpp"

namespace selfopt {

Rational History::reward_range_sum(Step first, Step last) const {
    if (first < 1 || last < first || last > length()) {
        throw ConfigError("reward window [" + std::to_string(first) + ", " +
                          std::to_string(last) + "] outside recorded history of length " +
                          std::to_string(length()));
    }
    return reward_prefix_[static_cast<std::size_t>(last)] -
           reward_prefix_[static_cast<std::size_t>(first - 1)];
}

Rational reward_sum(const History& h, Step k, Step n) {
    if (k < 1 || n < 0) {
        throw ConfigError("reward_sum requires k >= 1 and n >= 0");
    }
    return h.reward_range_sum(k, k + n);
}

}  // namespace selfopt
