#pragma once

#include <optional>
#include <vector>

#include "selfopt/agent/class_spec.hpp"
#include "selfopt/agent/horizons.hpp"
#include "selfopt/agent/mixture.hpp"
#include "selfopt/history.hpp"
#include "selfopt/policy.hpp"

namespace selfopt::agent {

// Phases: choose_t/choose_e/prepare are instantaneous bookkeeping, the other
// three label every acted step.
enum class Phase { choose_t, choose_e, prepare, exploit_to_k, explore, idle_t };
const char* phase_name(Phase phase);

// Log entry per preparation pass; kept for post-run horizon re-verification.
struct PrepareRecord {
    std::size_t nu_t = 0;
    std::size_t nu_e = 0;
    Step n = 0;
    Step h = 0;
    double eps = 0.0;
    double delta = 0.0;
    Horizons horizons;
};

struct AgentOptions {
    HorizonParams horizon;
};

// The self-optimizing agent over a declared class: tracks the mixture,
// maintains the consistency set T under the shrinking threshold alpha_s,
// alternates exploitation of the current candidate nu_t with bounded
// exploration bursts toward higher-valued candidates nu_e, and falls back to
// plain exploitation when no candidate remains.
//
// Driving protocol per interaction step: a = begin_step(); feed a to the true
// environment; observe(percept). Introspection accessors reflect the state at
// the moment the action was chosen.
class SelfOptimizingAgent {
public:
    explicit SelfOptimizingAgent(const ClassSpec& cls, AgentOptions options = {});

    Action begin_step();
    void observe(const Percept& percept);

    const ClassSpec& environment_class() const { return *cls_; }
    const History& history() const { return history_; }
    const MixtureState& mixture() const { return mixture_; }

    int s() const { return s_; }
    Step n() const { return n_; }
    std::size_t nu_t() const { return nu_t_; }
    std::optional<std::size_t> nu_e() const { return nu_e_; }
    // Phase of the action most recently returned by begin_step (or, between
    // steps, of the upcoming one).
    Phase phase() const;
    std::vector<std::size_t> consistency_members() const { return consistency_set(mixture_, s_); }

    const std::vector<PrepareRecord>& prepare_log() const { return prepare_log_; }

private:
    enum class Mode { searching_e, exploit_to_k, exploring };

    void initialize();
    void select_nu_t();                  // scan T from cursor j_t; bumps j_t
    bool try_select_nu_e();              // scan from cursor j_e; bumps j_e on success
    bool nu_e_valid() const;
    void iterate_loop();                 // loop top: n++, then resolve candidates
    void resolve_candidates();           // keep/reselect nu_e, enter body or idle
    void enter_loop_body();              // delta/eps/h, then prepare
    void start_prepare();                // h++, horizons, exploit mode
    void dispatch_after_exploration();

    const ClassSpec* cls_;
    AgentOptions options_;

    History history_;
    MixtureState mixture_;

    int s_ = 1;
    Step n_ = 1;
    Step j_t_ = 0;
    Step j_e_ = 0;
    std::size_t nu_t_ = 0;
    std::optional<std::size_t> nu_e_;

    std::unique_ptr<Policy> p_t_;
    std::unique_ptr<Policy> p_e_;

    Mode mode_ = Mode::searching_e;
    double delta_ = 0.0;
    double eps_ = 0.0;
    Step h_ = 0;
    Horizons horizons_;
    Step explored_ = 0;     // explore steps taken in the current burst
    std::optional<Action> pending_action_;

    bool initialized_ = false;
    std::vector<PrepareRecord> prepare_log_;
};

}  // namespace selfopt::agent
