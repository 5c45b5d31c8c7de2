#include "selfopt/interaction.hpp"

#include "selfopt/errors.hpp"

namespace selfopt {

Percept sample_step(const EnvironmentModel& env, EnvironmentModel::Cursor& at,
                    Policy& policy, History& h, RandomSource& rng) {
    Action action = policy.act(h);
    if (action.id < 0 || action.id >= env.action_alphabet().size()) {
        throw ConfigError("policy emitted action id " + std::to_string(action.id) +
                          " outside the alphabet of environment " + env.name());
    }
    PerceptDistribution dist = at.distribution(action);
    Percept percept = sample_percept(dist, rng);
    at.advance(action, percept);
    h.append(action, percept);
    return percept;
}

}  // namespace selfopt
