#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "selfopt/agent/agent.hpp"

namespace selfopt::agent {

const char* phase_name(Phase phase) {
    switch (phase) {
        case Phase::choose_t: return "choose_t";
        case Phase::choose_e: return "choose_e";
        case Phase::prepare: return "prepare";
        case Phase::exploit_to_k: return "exploit";
        case Phase::explore: return "explore";
        case Phase::idle_t: return "idle";
    }
    return "?";
}

SelfOptimizingAgent::SelfOptimizingAgent(const ClassSpec& cls, AgentOptions options)
    : cls_(&cls), options_(options), mixture_(cls) {}

Phase SelfOptimizingAgent::phase() const {
    if (!initialized_) return Phase::choose_t;
    switch (mode_) {
        case Mode::searching_e: return Phase::idle_t;
        case Mode::exploit_to_k: return Phase::exploit_to_k;
        case Mode::exploring: return Phase::explore;
    }
    return Phase::idle_t;
}

Action SelfOptimizingAgent::begin_step() {
    if (pending_action_) {
        throw std::logic_error("begin_step called again before observe");
    }
    if (!initialized_) initialize();
    Action action = mode_ == Mode::exploring ? p_e_->act(history_) : p_t_->act(history_);
    pending_action_ = action;
    return action;
}

void SelfOptimizingAgent::observe(const Percept& percept) {
    if (!pending_action_) {
        throw std::logic_error("observe called without a pending action");
    }
    Action action = *pending_action_;
    pending_action_.reset();
    history_.append(action, percept);
    mixture_.update(action, percept);

    double alpha = consistency_threshold(s_);
    switch (mode_) {
        case Mode::searching_e: {
            // Idle exploitation: keep monitoring nu_t's consistency and keep
            // looking for a higher-valued candidate as likelihoods evolve.
            if (mixture_.ratio(nu_t_) < alpha) {
                ++s_;
                select_nu_t();
                iterate_loop();
            } else {
                resolve_candidates();
            }
            return;
        }
        case Mode::exploit_to_k: {
            if (history_.length() + 1 == horizons_.k) {
                // Exploration begins at step k: instantiate nu_e's catch-up
                // policy on the realized prefix z_<k.
                p_e_ = cls_->member(*nu_e_).metadata.recovery(history_);
                mode_ = Mode::exploring;
                explored_ = 0;
            }
            return;
        }
        case Mode::exploring: {
            ++explored_;
            if (explored_ < h_) return;  // bursts last at least h steps
            Step i = history_.length();
            Step k = horizons_.k;
            const auto& meta_e = cls_->member(*nu_e_).metadata;
            double ref = meta_e.reference->range_sum(k, i);
            double realized = to_double(history_.reward_range_sum(k, i));
            double allowance =
                static_cast<double>(i - k) * eps_ / 4.0 + meta_e.d(k, eps_ / 4.0);
            bool deviated = std::abs(ref - realized) >= allowance;
            bool window_done = i >= 3 * k;
            bool e_dropped = mixture_.ratio(*nu_e_) < alpha;
            if (deviated || window_done || e_dropped) dispatch_after_exploration();
            return;
        }
    }
}

void SelfOptimizingAgent::initialize() {
    initialized_ = true;
    select_nu_t();
    iterate_loop();
}

void SelfOptimizingAgent::select_nu_t() {
    double alpha = consistency_threshold(s_);
    for (Step q = j_t_; q < j_t_ + static_cast<Step>(cls_->size()); ++q) {
        std::size_t member = cls_->numbering(q);
        if (mixture_.ratio(member) >= alpha) {
            nu_t_ = member;
            j_t_ = q + 1;
            p_t_ = cls_->member(member).metadata.recovery(history_);
            return;
        }
    }
    // sum_i w_i * ratio_i = 1 while any member is alive, so some ratio is
    // >= 1 > alpha_s; an empty sweep means every member died.
    throw std::logic_error("consistency set is empty: every member assigned "
                           "probability zero to the realized history");
}

bool SelfOptimizingAgent::try_select_nu_e() {
    for (Step q = j_e_; q < j_e_ + static_cast<Step>(cls_->size()); ++q) {
        std::size_t member = cls_->numbering(q);
        if (cls_->optimal_value(member) > cls_->optimal_value(nu_t_) &&
            mixture_.ratio(member) > 0.0) {
            nu_e_ = member;
            j_e_ = q + 1;
            return true;
        }
    }
    return false;
}

bool SelfOptimizingAgent::nu_e_valid() const {
    return nu_e_ && cls_->optimal_value(*nu_e_) > cls_->optimal_value(nu_t_) &&
           mixture_.ratio(*nu_e_) > 0.0;
}

void SelfOptimizingAgent::iterate_loop() {
    ++n_;
    resolve_candidates();
}

void SelfOptimizingAgent::resolve_candidates() {
    if (!nu_e_valid()) {
        nu_e_.reset();
        if (!try_select_nu_e()) {
            mode_ = Mode::searching_e;
            return;
        }
    }
    enter_loop_body();
}

void SelfOptimizingAgent::enter_loop_body() {
    delta_ = (cls_->optimal_value(*nu_e_) - cls_->optimal_value(nu_t_)) / 2.0;
    eps_ = std::min(cls_->member(nu_t_).metadata.epsilon_schedule(n_), delta_);
    h_ = j_e_;
    start_prepare();
}

void SelfOptimizingAgent::start_prepare() {
    ++h_;
    Step i_h = history_.length() + 1;
    horizons_ = prepare_exploration(cls_->member(nu_t_).metadata,
                                    cls_->member(*nu_e_).metadata, nu_t_, *nu_e_,
                                    i_h, h_, eps_, delta_, cls_->reward_bound(),
                                    options_.horizon);
    prepare_log_.push_back({nu_t_, *nu_e_, n_, h_, eps_, delta_, horizons_});
    mode_ = Mode::exploit_to_k;
    explored_ = 0;
}

void SelfOptimizingAgent::dispatch_after_exploration() {
    double alpha = consistency_threshold(s_);
    if (mixture_.ratio(nu_t_) < alpha) {
        ++s_;
        select_nu_t();
        iterate_loop();
    } else if (mixture_.ratio(*nu_e_) < alpha) {
        nu_e_.reset();
        iterate_loop();
    } else {
        start_prepare();
    }
}

}  // namespace selfopt::agent
