#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "selfopt/errors.hpp"
#include "selfopt/harness/config.hpp"

namespace selfopt::harness {

namespace {

using nlohmann::json;

// Collects every structural problem so that one pass reports them all.
struct Problems {
    std::string origin;
    std::vector<std::string> items;

    void add(const std::string& what) { items.push_back(what); }

    void raise_if_any() const {
        if (items.empty()) return;
        std::string message = origin + ": invalid config";
        for (const auto& item : items) message += "\n  - " + item;
        throw ConfigError(message);
    }
};

// Exact rational literals: integers, "a/b", or terminating decimals ("0.35").
Rational parse_rational(const json& v, const std::string& where, Problems& problems) {
    try {
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            auto slash = s.find('/');
            if (slash != std::string::npos) {
                return Rational(std::stoll(s.substr(0, slash)),
                                std::stoll(s.substr(slash + 1)));
            }
            auto dot = s.find('.');
            if (dot == std::string::npos) return Rational(std::stoll(s));
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = s.size() - dot - 1;
            if (frac > 18) throw std::out_of_range("too many decimal places");
            std::int64_t den = 1;
            for (std::size_t i = 0; i < frac; ++i) den *= 10;
            return Rational(std::stoll(digits), den);
        }
    } catch (const std::exception& e) {
        problems.add(where + ": not an exact rational (" + e.what() + ")");
        return Rational(0);
    }
    problems.add(where + ": rewards must be integers, \"a/b\", or decimal strings");
    return Rational(0);
}

envs::MdpEnvironmentSpec parse_mdp_member(const json& j, const std::string& where,
                                          double default_eps0, Problems& problems) {
    envs::MdpEnvironmentSpec spec;
    spec.name = j.value("name", std::string("mdp"));
    spec.eps0 = j.value("eps0", default_eps0);
    spec.n_states = j.value("n_states", 0);
    spec.n_actions = j.value("n_actions", 0);
    spec.initial_state = j.value("initial_state", 0);
    if (!j.contains("outcomes") || !j["outcomes"].is_array()) {
        problems.add(where + ": mdp member needs an 'outcomes' array");
        return spec;
    }
    for (std::size_t s = 0; s < j["outcomes"].size(); ++s) {
        const auto& row = j["outcomes"][s];
        std::vector<std::vector<envs::MdpOutcome>> per_action;
        if (!row.is_array()) {
            problems.add(where + ": outcomes[" + std::to_string(s) + "] must be an array");
            continue;
        }
        for (std::size_t a = 0; a < row.size(); ++a) {
            const auto& cell = row[a];
            std::vector<envs::MdpOutcome> outcomes;
            if (!cell.is_array()) {
                problems.add(where + ": outcomes[" + std::to_string(s) + "][" +
                             std::to_string(a) + "] must be an array");
            } else {
                for (const auto& o : cell) {
                    envs::MdpOutcome outcome;
                    outcome.next_state = o.value("next_state", -1);
                    outcome.probability = o.value("probability", -1.0);
                    outcome.reward = o.contains("reward")
                                         ? parse_rational(o["reward"], where, problems)
                                         : Rational(0);
                    outcomes.push_back(outcome);
                }
            }
            per_action.push_back(std::move(outcomes));
        }
        spec.outcomes.push_back(std::move(per_action));
    }
    return spec;
}

envs::EnvironmentBundle parse_member(const json& j, const std::string& where,
                                     double default_eps0, Problems& problems) {
    envs::EnvironmentBundle bundle;
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
        problems.add(where + ": member needs a 'family' string");
        return bundle;
    }
    const auto family = j["family"].get<std::string>();
    try {
        if (family == "mdp") {
            bundle = envs::make_mdp_environment(
                parse_mdp_member(j, where, default_eps0, problems));
        } else if (family == "bandit") {
            envs::BanditTowerSpec spec;
            spec.name = j.value("name", std::string("bandit"));
            spec.eps0 = j.value("eps0", default_eps0);
            spec.arms = j.value("arms", std::vector<double>{});
            bundle = envs::make_bandit_tower(spec);
        } else if (family == "trap") {
            envs::TrapSpec spec;
            spec.name = j.value("name", std::string("trap"));
            spec.eps0 = j.value("eps0", default_eps0);
            spec.s = j.value("s", -1);
            bundle = envs::make_trap_environment(spec);
        } else if (family == "passive") {
            envs::PassiveSpec spec;
            spec.name = j.value("name", std::string("passive"));
            spec.eps0 = j.value("eps0", default_eps0);
            spec.preamble = j.value("preamble", std::vector<int>{});
            spec.pattern = j.value("pattern", std::vector<int>{});
            bundle = envs::make_passive_environment(spec);
        } else {
            problems.add(where + ": unknown family '" + family + "'");
            return bundle;
        }
    } catch (const std::invalid_argument& e) {
        problems.add(where + ": " + e.what());
        return bundle;
    }

    // Optional metadata override, mainly to falsify certificates on purpose
    // in negative-control certification runs.
    if (j.contains("override_d")) {
        const auto& d = j["override_d"];
        const auto form = d.value("form", std::string(""));
        double scale = d.value("scale", 0.0);
        if (form == "zero") {
            bundle.metadata.d = DecaySpec::zero();
        } else if (form == "constant") {
            bundle.metadata.d = DecaySpec::constant(scale);
        } else if (form == "sqrt_k") {
            bundle.metadata.d = DecaySpec::sqrt_k(scale);
        } else if (form == "linear_k") {
            bundle.metadata.d = DecaySpec::linear_k(scale);
        } else {
            problems.add(where + ": override_d.form must be one of "
                                 "zero/constant/sqrt_k/linear_k");
        }
    }
    return bundle;
}

json parse_json(std::istream& in, const std::string& origin) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": not valid JSON (" + e.what() + ")");
    }
}

void check_schema_version(const json& j, Problems& problems) {
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
        problems.add("missing integer 'schema_version'");
    } else if (j["schema_version"].get<int>() != kSchemaVersion) {
        problems.add("unsupported schema_version " +
                     std::to_string(j["schema_version"].get<int>()) + " (expected " +
                     std::to_string(kSchemaVersion) + ")");
    }
}

AgentConfig parse_agent_block(const json& j, Problems& problems) {
    AgentConfig agent;
    if (!j.contains("agent")) return agent;
    const auto& a = j["agent"];
    agent.eps0 = a.value("eps0", agent.eps0);
    agent.k_cap = a.value("k_cap", agent.k_cap);
    agent.m_cap = a.value("m_cap", agent.m_cap);
    if (!(agent.eps0 > 0.0)) problems.add("agent.eps0 must be positive");
    if (agent.k_cap < 1) problems.add("agent.k_cap must be at least 1");
    if (agent.m_cap < 1) problems.add("agent.m_cap must be at least 1");
    return agent;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& origin) {
    json j = parse_json(in, origin);
    Problems problems{origin, {}};
    ExperimentConfig config;

    check_schema_version(j, problems);
    config.name = j.value("name", config.name);
    config.agent = parse_agent_block(j, problems);

    if (!j.contains("members") || !j["members"].is_array() || j["members"].empty()) {
        problems.add("'members' must be a nonempty array");
    } else {
        for (std::size_t i = 0; i < j["members"].size(); ++i) {
            config.members.push_back(parse_member(j["members"][i],
                                                  "members[" + std::to_string(i) + "]",
                                                  config.agent.eps0, problems));
        }
    }

    if (j.contains("weights")) {
        if (!j["weights"].is_array()) {
            problems.add("'weights' must be an array");
        } else {
            config.weights = j["weights"].get<std::vector<double>>();
            if (config.weights->size() != config.members.size()) {
                problems.add("'weights' length must match 'members'");
            }
            for (double w : *config.weights) {
                if (!(w > 0.0)) {
                    problems.add("'weights' entries must be positive");
                    break;
                }
            }
        }
    }

    config.true_index = j.value("true_index", std::size_t{0});
    if (!config.members.empty() && config.true_index >= config.members.size()) {
        problems.add("'true_index' out of range");
    }

    config.horizon = j.value("horizon", Step{0});
    if (config.horizon < 1) problems.add("'horizon' must be at least 1");

    if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty()) {
        problems.add("'seeds' must be a nonempty array");
    } else {
        config.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    }

    config.out_dir = j.value("out_dir", std::string(""));
    problems.raise_if_any();
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_experiment_config(in, path);
}

CertifyConfig parse_certify_config(std::istream& in, const std::string& origin) {
    json j = parse_json(in, origin);
    Problems problems{origin, {}};
    CertifyConfig config;

    check_schema_version(j, problems);
    config.name = j.value("name", config.name);

    if (!j.contains("subject")) {
        problems.add("missing 'subject' member definition");
    } else {
        config.subject = parse_member(j["subject"], "subject", 0.5, problems);
    }

    if (!j.contains("grid") || !j["grid"].is_array() || j["grid"].empty()) {
        problems.add("'grid' must be a nonempty array of {k, n, eps} cells");
    } else {
        for (std::size_t i = 0; i < j["grid"].size(); ++i) {
            const auto& cell = j["grid"][i];
            certify::CertifyCell parsed;
            parsed.k = cell.value("k", Step{0});
            parsed.n = cell.value("n", Step{-1});
            parsed.eps = cell.value("eps", 0.0);
            if (parsed.k < 1 || parsed.n < 0 || !(parsed.eps > 0.0)) {
                problems.add("grid[" + std::to_string(i) +
                             "] needs k >= 1, n >= 0, eps > 0");
            }
            config.grid.push_back(parsed);
        }
    }

    config.trials = j.value("trials", Step{0});
    if (config.trials < 1) problems.add("'trials' must be at least 1");

    config.adversaries =
        j.value("adversaries", std::vector<std::string>{"random", "worst"});
    for (const auto& name : config.adversaries) {
        if (name != "random" && name != "worst") {
            problems.add("unknown adversary '" + name + "' (use random/worst)");
        }
    }
    if (config.adversaries.empty()) problems.add("'adversaries' must be nonempty");

    config.out_dir = j.value("out_dir", std::string(""));
    problems.raise_if_any();
    return config;
}

CertifyConfig load_certify_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_certify_config(in, path);
}

envs::MdpEnvironmentSpec parse_mdp_spec(std::istream& in, const std::string& origin) {
    json j = parse_json(in, origin);
    Problems problems{origin, {}};
    if (!j.is_object() || j.value("family", std::string("")) != "mdp") {
        problems.add("expected a member object with family \"mdp\"");
        problems.raise_if_any();
    }
    auto spec = parse_mdp_member(j, "mdp", 0.5, problems);
    problems.raise_if_any();
    return spec;
}

envs::MdpEnvironmentSpec load_mdp_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_mdp_spec(in, path);
}

std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
    if (!flag_value.empty()) return flag_value;
    if (!config_value.empty()) return config_value;
    if (const char* env = std::getenv(kOutDirEnvVar); env && *env) return env;
    return "./out";
}

}  // namespace selfopt::harness
