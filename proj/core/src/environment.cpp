#include "selfopt/environment.hpp"

#include <cmath>

#include "selfopt/errors.hpp"

namespace selfopt {

std::unique_ptr<EnvironmentModel::Cursor> cursor_at(const EnvironmentModel& env,
                                                    const History& h) {
    auto cur = env.cursor();
    for (Step i = 1; i <= h.length(); ++i) {
        cur->advance(h.action(i), h.percept(i));
    }
    return cur;
}

PerceptDistribution conditional_percept_distribution(const EnvironmentModel& env,
                                                     const History& h, Action action) {
    return cursor_at(env, h)->distribution(action);
}

double probability_of(const PerceptDistribution& dist, const Percept& percept) {
    double p = 0.0;
    for (const auto& wp : dist) {
        if (wp.percept == percept) p += wp.probability;
    }
    return p;
}

Percept sample_percept(const PerceptDistribution& dist, RandomSource& rng) {
    if (dist.empty()) throw ConfigError("cannot sample from an empty percept distribution");
    double u = rng.uniform01();
    double cdf = 0.0;
    for (const auto& wp : dist) {
        cdf += wp.probability;
        if (u < cdf) return wp.percept;
    }
    return dist.back().percept;  // numerical tail
}

void check_normalized(const PerceptDistribution& dist, const std::string& context) {
    double total = 0.0;
    for (const auto& wp : dist) {
        if (wp.probability < 0.0) {
            throw ConfigError(context + ": negative percept probability");
        }
        total += wp.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ConfigError(context + ": percept distribution sums to " + std::to_string(total));
    }
}

}  // namespace selfopt
