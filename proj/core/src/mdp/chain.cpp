#include "selfopt/mdp/chain.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "selfopt/errors.hpp"

namespace selfopt::mdp {

namespace {

void validate_chain(const Matrix& chain) {
    const std::size_t n = chain.size();
    if (n == 0) throw ConfigError("empty chain");
    for (const auto& row : chain) {
        if (row.size() != n) throw ConfigError("chain matrix is not square");
        double total = 0.0;
        for (double p : row) {
            if (p < -1e-15) throw ConfigError("negative transition probability");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw ConfigError("chain row sums to " + std::to_string(total));
        }
    }
}

std::vector<bool> reachable(const Matrix& edges, int start, bool transpose) {
    const int n = static_cast<int>(edges.size());
    std::vector<bool> seen(n, false);
    std::queue<int> queue;
    seen[start] = true;
    queue.push(start);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        for (int v = 0; v < n; ++v) {
            double p = transpose ? edges[v][u] : edges[u][v];
            if (p > 0.0 && !seen[v]) {
                seen[v] = true;
                queue.push(v);
            }
        }
    }
    return seen;
}

// (-1, -1) when strongly connected, else a witness pair (from, to) with no
// path from -> to.
std::pair<int, int> connectivity_witness(const Matrix& edges) {
    const int n = static_cast<int>(edges.size());
    auto forward = reachable(edges, 0, false);
    for (int v = 0; v < n; ++v) {
        if (!forward[v]) return {0, v};
    }
    auto backward = reachable(edges, 0, true);
    for (int v = 0; v < n; ++v) {
        if (!backward[v]) return {v, 0};
    }
    return {-1, -1};
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = m[i][j];
    return out;
}

std::vector<double> solve_invariant(const Matrix& chain, const char* what) {
    const int n = static_cast<int>(chain.size());
    // pi P = pi with sum(pi) = 1: replace the last balance equation by the
    // normalization row.
    Eigen::MatrixXd a = to_eigen(chain).transpose() - Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < n; ++j) a(n - 1, j) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(b);

    Eigen::VectorXd residual = to_eigen(chain).transpose() * pi - pi;
    if (residual.lpNorm<Eigen::Infinity>() > 1e-8 || pi.minCoeff() < -1e-8) {
        throw std::runtime_error(std::string(what) + ": no valid invariant distribution");
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = std::max(0.0, pi(i));
        total += out[static_cast<std::size_t>(i)];
    }
    for (auto& p : out) p /= total;
    return out;
}

}  // namespace

std::vector<double> stationary_distribution(const Matrix& chain) {
    validate_chain(chain);
    auto witness = connectivity_witness(chain);
    if (witness.first >= 0) {
        throw NonErgodicError(witness.first, witness.second,
                              "chain is reducible: no path from state " +
                                  std::to_string(witness.first) + " to state " +
                                  std::to_string(witness.second));
    }
    return solve_invariant(chain, "stationary_distribution");
}

std::vector<double> unichain_stationary(const Matrix& chain) {
    validate_chain(chain);
    return solve_invariant(chain, "unichain_stationary");
}

Matrix expected_hitting_times(const Matrix& chain) {
    validate_chain(chain);
    auto witness = connectivity_witness(chain);
    if (witness.first >= 0) {
        throw NonErgodicError(witness.first, witness.second,
                              "hitting times undefined: no path from state " +
                                  std::to_string(witness.first) + " to state " +
                                  std::to_string(witness.second));
    }
    const int n = static_cast<int>(chain.size());
    Matrix hitting(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int target = 0; target < n; ++target) {
        // h(a) = 1 + sum_{c != target} P(a, c) h(c) for a != target.
        Eigen::MatrixXd a(n - 1, n - 1);
        Eigen::VectorXd b = Eigen::VectorXd::Ones(n - 1);
        auto packed = [target](int state) { return state < target ? state : state - 1; };
        for (int from = 0; from < n; ++from) {
            if (from == target) continue;
            for (int to = 0; to < n; ++to) {
                if (to == target) continue;
                double p = chain[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
                a(packed(from), packed(to)) =
                    (from == to ? 1.0 : 0.0) - p;
            }
        }
        Eigen::VectorXd h = a.partialPivLu().solve(b);
        double return_time = 1.0;
        for (int c = 0; c < n; ++c) {
            if (c == target) continue;
            double p = chain[static_cast<std::size_t>(target)][static_cast<std::size_t>(c)];
            return_time += p * h(packed(c));
            hitting[static_cast<std::size_t>(c)][static_cast<std::size_t>(target)] = h(packed(c));
        }
        hitting[static_cast<std::size_t>(target)][static_cast<std::size_t>(target)] = return_time;
    }
    return hitting;
}

ErgodicityResult check_ergodic(const FiniteMdp& mdp) {
    mdp.validate();
    const int n = mdp.n_states;
    // Chain of the uniform-over-actions policy; its support equals the
    // union-over-actions edge set.
    Matrix uniform(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < mdp.n_actions; ++a) {
            for (int t = 0; t < n; ++t) {
                uniform[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] +=
                    mdp.transition[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)]
                                  [static_cast<std::size_t>(t)] /
                    static_cast<double>(mdp.n_actions);
            }
        }
    }
    auto witness = connectivity_witness(uniform);
    if (witness.first >= 0) {
        return {false, witness.first, witness.second};
    }
    return {true, -1, -1};
}

int chain_period(const Matrix& chain) {
    validate_chain(chain);
    const int n = static_cast<int>(chain.size());
    // gcd of (level[u] + 1 - level[v]) over edges u -> v, levels from a BFS
    // tree rooted at state 0; standard period computation for irreducible
    // chains.
    std::vector<int> level(static_cast<std::size_t>(n), -1);
    std::queue<int> queue;
    level[0] = 0;
    queue.push(0);
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop();
        for (int v = 0; v < n; ++v) {
            if (chain[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0.0 &&
                level[static_cast<std::size_t>(v)] < 0) {
                level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                queue.push(v);
            }
        }
    }
    int g = 0;
    for (int u = 0; u < n; ++u) {
        if (level[static_cast<std::size_t>(u)] < 0) continue;
        for (int v = 0; v < n; ++v) {
            if (chain[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] > 0.0 &&
                level[static_cast<std::size_t>(v)] >= 0) {
                g = std::gcd(g, std::abs(level[static_cast<std::size_t>(u)] + 1 -
                                         level[static_cast<std::size_t>(v)]));
            }
        }
    }
    return g == 0 ? 1 : g;
}

MixingBound mixing_bound(const Matrix& chain, Step k) {
    if (k < 1) throw ConfigError("mixing_bound requires k >= 1");
    auto pi = stationary_distribution(chain);  // validates + irreducibility
    const int n = static_cast<int>(chain.size());

    Eigen::MatrixXd base = to_eigen(chain);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    Step e = k;
    while (e > 0) {  // power by squaring
        if (e & 1) power = power * base;
        base = base * base;
        e >>= 1;
    }

    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double tv = 0.0;
        for (int j = 0; j < n; ++j) {
            tv += std::abs(power(i, j) - pi[static_cast<std::size_t>(j)]);
        }
        worst = std::max(worst, 0.5 * tv);
    }
    return {worst, chain_period(chain) == 1};
}

}  // namespace selfopt::mdp
