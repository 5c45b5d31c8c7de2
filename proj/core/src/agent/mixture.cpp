#include <algorithm>
#include <limits>
#include <stdexcept>

#include "selfopt/agent/mixture.hpp"
#include "selfopt/environment.hpp"

namespace selfopt::agent {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

MixtureState::MixtureState(const ClassSpec& cls) : cls_(&cls) {
    cursors_.reserve(cls.size());
    for (std::size_t i = 0; i < cls.size(); ++i) {
        cursors_.push_back(cls.member(i).environment->cursor());
    }
    log_lik_.assign(cls.size(), 0.0);
    recompute_mixture();
}

MixtureState MixtureState::from_log_likelihoods(const ClassSpec& cls,
                                                std::vector<double> log_likelihoods) {
    if (log_likelihoods.size() != cls.size()) {
        throw std::invalid_argument("log-likelihood vector length mismatch");
    }
    MixtureState state(cls);
    state.cursors_.clear();
    state.log_lik_ = std::move(log_likelihoods);
    state.recompute_mixture();
    return state;
}

void MixtureState::update(Action action, const Percept& percept) {
    if (cursors_.empty()) {
        throw std::logic_error("cannot update a mixture built from raw log-likelihoods");
    }
    for (std::size_t i = 0; i < cursors_.size(); ++i) {
        if (log_lik_[i] != kNegInf) {
            double p = probability_of(cursors_[i]->distribution(action), percept);
            log_lik_[i] = p > 0.0 ? log_lik_[i] + std::log(p) : kNegInf;
        }
        // Dead members still advance: the cursor contract tolerates
        // off-support continuations and keeps indices aligned.
        cursors_[i]->advance(action, percept);
    }
    ++steps_;
    recompute_mixture();
}

void MixtureState::recompute_mixture() {
    // log xi = log sum_i w_i exp(log_lik_i), max-shifted for stability.
    double shift = kNegInf;
    for (std::size_t i = 0; i < log_lik_.size(); ++i) {
        if (log_lik_[i] > shift) shift = log_lik_[i];
    }
    if (shift == kNegInf) {
        log_mixture_ = kNegInf;  // every member died; ratios are all zero
        return;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < log_lik_.size(); ++i) {
        if (log_lik_[i] != kNegInf) {
            sum += cls_->weight(i) * std::exp(log_lik_[i] - shift);
        }
    }
    log_mixture_ = shift + std::log(sum);
}

double MixtureState::ratio(std::size_t i) const {
    double l = log_lik_.at(i);
    if (l == kNegInf) return 0.0;
    return std::exp(l - log_mixture_);
}

std::vector<double> MixtureState::ratios() const {
    std::vector<double> out(log_lik_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ratio(i);
    return out;
}

std::vector<std::size_t> consistency_set(const MixtureState& mixture, int s) {
    std::vector<std::size_t> out;
    double threshold = consistency_threshold(s);
    for (std::size_t i = 0; i < mixture.size(); ++i) {
        if (mixture.ratio(i) >= threshold) out.push_back(i);
    }
    return out;
}

}  // namespace selfopt::agent
