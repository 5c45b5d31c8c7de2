#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "selfopt/environment.hpp"
#include "selfopt/mdp/finite_mdp.hpp"
#include "selfopt/metadata.hpp"
#include "selfopt/random.hpp"

namespace selfopt::envs {

// An environment together with its self-declared stability certificate.
// worst_prefix is the family's structured adversary hook: it emits an action
// prefix of the requested length designed to make recovery expensive
// (climb-to-top for the bandit, long b-runs for traps, ...). Null means the
// family declares no structured adversary beyond random actions.
struct EnvironmentBundle {
    std::string name;
    std::shared_ptr<const EnvironmentModel> environment;
    ValueStabilityMetadata metadata;
    std::function<std::vector<Action>(Step length, RandomSource&)> worst_prefix;
};

// ---- Ergodic MDP environments ----

struct MdpOutcome {
    int next_state = 0;
    Rational reward;
    double probability = 0.0;
};

struct MdpEnvironmentSpec {
    int n_states = 0;
    int n_actions = 0;
    int initial_state = 0;
    // outcomes[s][a]: joint distribution over (next state, reward).
    std::vector<std::vector<std::vector<MdpOutcome>>> outcomes;
    std::string name = "mdp";
    double eps0 = 0.5;
};

// Rejects non-ergodic specs (NonErgodicError with a witness pair). The
// declared certificate: constant d from worst-case expected recovery time,
// exponential phi with constants from a mixing surrogate of the optimal
// chain, reach-then-follow recovery.
EnvironmentBundle make_mdp_environment(const MdpEnvironmentSpec& spec);

// Solver view of an MdpEnvironmentSpec (marginal transitions, expected rewards).
mdp::FiniteMdp to_finite_mdp(const MdpEnvironmentSpec& spec);

// ---- Truncated bandit tower ----

// Arms on a ladder; actions g (gamble at the current arm), u (one arm up,
// clamped at the top), d (back to arm 0). Pulling g at arm i pays 1 with
// probability arms[i], else 0; u and d pay 0. The declared reference policy
// is a slow sweep that revisits every arm each epoch and dwells ever longer
// at the best arm, so d(k, eps) = sqrt(k) is valid at every k.
struct BanditTowerSpec {
    std::vector<double> arms;
    std::string name = "bandit";
    double eps0 = 0.5;
};

EnvironmentBundle make_bandit_tower(const BanditTowerSpec& spec);

// ---- Trap environments ----

// Actions a and b; a always pays 1. For level s >= 1, b pays 2 once the
// longest recorded run of b actions exceeds the number n_i of a actions taken
// and n_i >= s, else 0; for s = 0, b always pays 0. Levels s >= 1 declare
// d(k, eps) = k: the family deliberately breaks the o(k) requirement.
struct TrapSpec {
    int s = 0;
    std::string name = "trap";
    double eps0 = 0.5;
};

EnvironmentBundle make_trap_environment(const TrapSpec& spec);

// ---- Passive sequence prediction ----

// Observations follow a fixed eventually periodic binary stream regardless of
// actions; the reward at step i is 1 iff the previous action named the
// current observation (vacuously 1 at the first step). d == 1, phi == 0.
struct PassiveSpec {
    std::vector<int> preamble;
    std::vector<int> pattern;  // nonempty, repeated forever
    std::string name = "passive";
    double eps0 = 0.5;
};

EnvironmentBundle make_passive_environment(const PassiveSpec& spec);

}  // namespace selfopt::envs
