#pragma once

#include <vector>

#include "selfopt/mdp/finite_mdp.hpp"

namespace selfopt::mdp {

// Unique stationary distribution of an irreducible row-stochastic chain.
// Throws NonErgodicError naming a non-communicating pair when the chain is
// reducible.
std::vector<double> stationary_distribution(const Matrix& chain);

// Stationary distribution for a unichain kernel (single recurrent class plus
// possibly transient states); transient states receive mass 0. Used
// internally for optimal-policy chains whose transients are harmless.
std::vector<double> unichain_stationary(const Matrix& chain);

// Expected first-passage times l(a, b): hitting[a][b] = expected steps to
// first reach b starting from a (diagonal = expected return time). Requires
// irreducibility.
Matrix expected_hitting_times(const Matrix& chain);

struct ErgodicityResult {
    bool ergodic = false;
    // When not ergodic: a pair of states with no connecting path under the
    // union-over-actions edge set.
    int witness_from = -1;
    int witness_to = -1;
};

// An MDP is accepted as ergodic when the uniform-over-actions policy induces
// an irreducible chain (equivalently, the union-over-actions edge graph is
// strongly connected).
ErgodicityResult check_ergodic(const FiniteMdp& mdp);

struct MixingBound {
    double value = 0.0;  // sup_i TV(P^k(i, .), pi)
    bool aperiodic = true;
};

// Total-variation mixing surrogate at lag k. Periodic chains are flagged
// (the bound cannot decay); the value is still reported.
MixingBound mixing_bound(const Matrix& chain, Step k);

// Period of an irreducible chain (gcd of cycle lengths through state 0).
int chain_period(const Matrix& chain);

}  // namespace selfopt::mdp
