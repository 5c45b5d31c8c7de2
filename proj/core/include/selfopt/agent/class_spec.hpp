#pragma once

#include <optional>
#include <vector>

#include "selfopt/envs/families.hpp"

namespace selfopt::agent {

struct ClassMember {
    std::string name;
    std::shared_ptr<const EnvironmentModel> environment;
    ValueStabilityMetadata metadata;
    double weight = 0.0;
};

// Countable (here finite) class of declared-value-stable environments with
// prior weights and a fixed round-robin numbering in which every member
// appears infinitely often.
class ClassSpec {
public:
    // Weights default to 2^-(index+1), normalized to sum 1.
    explicit ClassSpec(std::vector<envs::EnvironmentBundle> members,
                       std::optional<std::vector<double>> weights = std::nullopt);

    std::size_t size() const { return members_.size(); }
    const ClassMember& member(std::size_t i) const { return members_.at(i); }
    double weight(std::size_t i) const { return members_.at(i).weight; }
    double optimal_value(std::size_t i) const { return members_.at(i).metadata.optimal_value; }

    // Member at numbering position q (cyclic).
    std::size_t numbering(Step position) const {
        return static_cast<std::size_t>(position) % members_.size();
    }

    // Shared action alphabet (validated identical across members).
    const Alphabet& action_alphabet() const;
    // Largest reward bound across members.
    double reward_bound() const { return r_max_; }

private:
    std::vector<ClassMember> members_;
    double r_max_ = 0.0;
};

}  // namespace selfopt::agent
