#include <algorithm>
#include <cmath>

#include "selfopt/agent/class_spec.hpp"
#include "selfopt/errors.hpp"

namespace selfopt::agent {

ClassSpec::ClassSpec(std::vector<envs::EnvironmentBundle> members,
                     std::optional<std::vector<double>> weights) {
    if (members.empty()) throw ConfigError("environment class must be nonempty");
    if (weights && weights->size() != members.size()) {
        throw ConfigError("weight list length must match the member count");
    }

    std::vector<double> w;
    if (weights) {
        w = *weights;
        double total = 0.0;
        for (double x : w) {
            if (!(x > 0.0)) throw ConfigError("prior weights must be positive");
            total += x;
        }
        for (double& x : w) x /= total;
    } else {
        // 2^-(i+1), normalized (the tail mass of the truncated series is
        // folded in by the normalization).
        double total = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            w.push_back(std::pow(2.0, -static_cast<double>(i + 1)));
            total += w.back();
        }
        for (double& x : w) x /= total;
    }

    members_.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto& bundle = members[i];
        if (!bundle.environment) throw ConfigError("class member has no environment");
        if (!bundle.metadata.reference) {
            throw ConfigError("class member '" + bundle.name +
                              "' declares no reference rewards");
        }
        if (!bundle.metadata.phi.fn) {
            throw ConfigError("class member '" + bundle.name + "' declares no tail bound");
        }
        if (!bundle.metadata.epsilon_schedule) {
            throw ConfigError("class member '" + bundle.name +
                              "' declares no precision schedule");
        }
        if (!bundle.metadata.recovery) {
            throw ConfigError("class member '" + bundle.name +
                              "' declares no recovery policy");
        }
        members_.push_back(ClassMember{bundle.name, bundle.environment,
                                       bundle.metadata, w[i]});
        r_max_ = std::max(r_max_, to_double(bundle.environment->reward_bound()));
    }

    const Alphabet& first = members_.front().environment->action_alphabet();
    for (const auto& m : members_) {
        if (m.environment->action_alphabet().labels != first.labels) {
            throw ConfigError("class members must share one action alphabet; '" +
                              m.name + "' differs");
        }
    }
}

const Alphabet& ClassSpec::action_alphabet() const {
    return members_.front().environment->action_alphabet();
}

}  // namespace selfopt::agent
