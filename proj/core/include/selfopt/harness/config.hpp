#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "selfopt/agent/agent.hpp"
#include "selfopt/certify/certify.hpp"
#include "selfopt/envs/families.hpp"

namespace selfopt::harness {

inline constexpr int kSchemaVersion = 1;
// Default output directory can be supplied through this environment
// variable; an explicit --out flag or config entry wins.
inline constexpr const char* kOutDirEnvVar = "SELFOPT_OUT_DIR";

struct AgentConfig {
    double eps0 = 0.5;
    Step k_cap = 10'000'000;
    Step m_cap = 1'000'000;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::vector<envs::EnvironmentBundle> members;
    std::optional<std::vector<double>> weights;
    std::size_t true_index = 0;
    Step horizon = 0;
    std::vector<std::uint64_t> seeds;
    std::string out_dir;  // may be empty: resolved against flag / env var
    AgentConfig agent;
};

struct CertifyConfig {
    std::string name = "certify";
    envs::EnvironmentBundle subject;
    std::vector<certify::CertifyCell> grid;
    Step trials = 0;
    std::vector<std::string> adversaries;  // subset of {random, worst}
    std::string out_dir;
};

// Parse + validate a JSON experiment config. All structural problems are
// aggregated into one ConfigError thrown before any file output happens.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& origin);

CertifyConfig load_certify_config(const std::string& path);
CertifyConfig parse_certify_config(std::istream& in, const std::string& origin);

// A single member definition of family "mdp", for the solver command.
envs::MdpEnvironmentSpec load_mdp_spec(const std::string& path);
envs::MdpEnvironmentSpec parse_mdp_spec(std::istream& in, const std::string& origin);

// Resolution order for the output directory: explicit flag, config entry,
// environment variable, "./out".
std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value);

}  // namespace selfopt::harness
