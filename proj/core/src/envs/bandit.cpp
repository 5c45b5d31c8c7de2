#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "selfopt/envs/families.hpp"
#include "selfopt/errors.hpp"

namespace selfopt::envs {

namespace {

constexpr int kActionGamble = 0;
constexpr int kActionUp = 1;
constexpr int kActionDown = 2;

// Reference sweep over the ladder. Epoch e >= 1:
//   sweep   g@0, u, g@1, u, ..., g@(M-1)          (2M-1 steps)
//   reset   d                                     (1 step)
//   climb   u * best                              (best steps)
//   dwell   g@best * (M * 2^e)                    (dwell steps)
//   reset   d                                     (1 step)
// The dwell doubles every epoch, so the time share of non-dwell steps decays
// geometrically while every arm is still revisited forever.
class SweepSchedule {
public:
    SweepSchedule(int arms, int best) : arms_(arms), best_(best) {
        Step end = 0;
        epoch_end_.push_back(0);  // epoch indices are 1-based
        for (int e = 1; e <= 64; ++e) {
            end += epoch_length(e);
            epoch_end_.push_back(end);
        }
    }

    Step epoch_length(int e) const {
        return 2 * static_cast<Step>(arms_) + 1 + best_ + dwell_length(e);
    }

    Step dwell_length(int e) const {
        return static_cast<Step>(arms_) << std::min(e, 40);
    }

    Step first_step_of_epoch(int e) const {
        return epoch_end_[static_cast<std::size_t>(e - 1)] + 1;
    }

    // Epoch containing step t (1-based).
    int epoch_of(Step t) const {
        if (t < 1 || t > epoch_end_.back()) {
            throw std::logic_error("bandit schedule queried beyond supported range");
        }
        auto it = std::lower_bound(epoch_end_.begin() + 1, epoch_end_.end(), t);
        return static_cast<int>(it - epoch_end_.begin());
    }

    struct Slot {
        int action;    // kActionGamble / kActionUp / kActionDown
        int position;  // arm occupied when acting
    };

    Slot slot(Step t) const {
        int e = epoch_of(t);
        Step offset = t - first_step_of_epoch(e);
        Step sweep_len = 2 * static_cast<Step>(arms_) - 1;
        if (offset < sweep_len) {
            int arm = static_cast<int>(offset / 2);
            return offset % 2 == 0 ? Slot{kActionGamble, arm} : Slot{kActionUp, arm};
        }
        offset -= sweep_len;
        if (offset == 0) return {kActionDown, arms_ - 1};
        offset -= 1;
        if (offset < best_) return {kActionUp, static_cast<int>(offset)};
        offset -= best_;
        if (offset < dwell_length(e)) return {kActionGamble, best_};
        return {kActionDown, best_};
    }

    int arms() const { return arms_; }
    int best() const { return best_; }

private:
    int arms_;
    int best_;
    std::vector<Step> epoch_end_;
};

class BanditEnvironment final : public EnvironmentModel {
public:
    explicit BanditEnvironment(BanditTowerSpec spec)
        : spec_(std::move(spec)),
          actions_{{"g", "u", "d"}},
          observations_(trivial_observation_alphabet()) {}

    class ArmCursor final : public Cursor {
    public:
        explicit ArmCursor(const BanditEnvironment* env) : env_(env) {}

        PerceptDistribution distribution(Action action) const override {
            if (action.id == kActionGamble) {
                double p = env_->spec_.arms[static_cast<std::size_t>(arm_)];
                PerceptDistribution dist;
                if (p > 0.0) dist.push_back({Percept{Rational(1), 0}, p});
                if (p < 1.0) dist.push_back({Percept{Rational(0), 0}, 1.0 - p});
                return dist;
            }
            return {{Percept{Rational(0), 0}, 1.0}};
        }

        void advance(Action action, const Percept&) override {
            if (action.id == kActionUp) {
                arm_ = std::min(arm_ + 1, static_cast<int>(env_->spec_.arms.size()) - 1);
            } else if (action.id == kActionDown) {
                arm_ = 0;
            }
        }

        std::unique_ptr<Cursor> clone() const override {
            return std::make_unique<ArmCursor>(*this);
        }

    private:
        const BanditEnvironment* env_;
        int arm_ = 0;
    };

    const std::string& name() const override { return spec_.name; }
    const Alphabet& action_alphabet() const override { return actions_; }
    const Alphabet& observation_alphabet() const override { return observations_; }
    Rational reward_bound() const override { return Rational(1); }

    std::unique_ptr<Cursor> cursor() const override {
        return std::make_unique<ArmCursor>(this);
    }

private:
    BanditTowerSpec spec_;
    Alphabet actions_;
    Alphabet observations_;
};

class BanditReferenceRewards final : public ReferenceRewards {
public:
    BanditReferenceRewards(std::shared_ptr<const SweepSchedule> schedule,
                           std::vector<double> arms)
        : ReferenceRewards(arms[static_cast<std::size_t>(schedule->best())]),
          schedule_(std::move(schedule)),
          arms_(std::move(arms)) {
        // Per-epoch deviation budget: each sweep pull deviates by
        // |arm - best|, and every u/d/climb step deviates by best.
        double best = limit();
        per_epoch_ = 0.0;
        for (double a : arms_) per_epoch_ += std::abs(a - best);
        per_epoch_ += best * static_cast<double>(schedule_->arms() + 1 + schedule_->best());
    }

    double deviation_budget(Step m) const override {
        return per_epoch_ * static_cast<double>(schedule_->epoch_of(m));
    }

    Step uniform_band_start(Step i_h, double band) const override {
        Step k2 = 2 * i_h + 1;
        if (band <= 0.0) {
            throw std::invalid_argument("uniform_band_start needs a positive band");
        }
        int calm = 0;
        for (int e = 1; e <= 60 && calm < 3; ++e) {
            Step t_e = schedule_->first_step_of_epoch(e);
            Step t_next = schedule_->first_step_of_epoch(e + 1);
            // Condition inside epoch e: per_epoch * e <= band * (m - i_h),
            // i.e. the window mean sits inside the band for every m with
            // m >= i_h + budget/band. (1e-12 relative slop keeps decimal
            // parameters from shifting the boundary step.)
            double need = static_cast<double>(i_h) + per_epoch_ * e / band;
            Step first_ok = static_cast<Step>(std::ceil(need * (1.0 - 1e-12)));
            while (per_epoch_ * e >
                   band * static_cast<double>(first_ok - i_h) * (1.0 + 1e-12)) {
                ++first_ok;
            }
            if (first_ok > t_e) {
                k2 = std::max(k2, std::min(first_ok, t_next) - 1);
                calm = 0;
            } else {
                ++calm;
            }
        }
        if (calm < 3) {
            throw std::invalid_argument(
                "bandit uniform band narrower than the schedule supports");
        }
        return k2;
    }

protected:
    void extend(std::vector<double>& out, Step target) override {
        while (static_cast<Step>(out.size()) < target) {
            Step t = static_cast<Step>(out.size()) + 1;
            auto slot = schedule_->slot(t);
            out.push_back(slot.action == kActionGamble
                              ? arms_[static_cast<std::size_t>(slot.position)]
                              : 0.0);
        }
    }

private:
    std::shared_ptr<const SweepSchedule> schedule_;
    std::vector<double> arms_;
    double per_epoch_ = 0.0;
};

// Chases the schedule: replays the recorded actions to learn its own arm,
// then moves toward the scheduled position and copies the schedule once
// aligned. Alignment is absorbing because both sides then apply identical
// actions from identical positions.
class BanditRecoveryPolicy final : public Policy {
public:
    BanditRecoveryPolicy(std::shared_ptr<const SweepSchedule> schedule, int arms)
        : schedule_(std::move(schedule)), arms_(arms) {}

    Action act(const History& h) override {
        if (h.length() < processed_) {
            throw std::logic_error("bandit recovery policy fed a shrinking history");
        }
        for (Step t = processed_ + 1; t <= h.length(); ++t) {
            int a = h.action(t).id;
            if (a == kActionUp) {
                arm_ = std::min(arm_ + 1, arms_ - 1);
            } else if (a == kActionDown) {
                arm_ = 0;
            }
        }
        processed_ = h.length();
        auto slot = schedule_->slot(h.length() + 1);
        if (arm_ == slot.position) return Action{slot.action};
        return arm_ < slot.position ? Action{kActionUp} : Action{kActionDown};
    }

private:
    std::shared_ptr<const SweepSchedule> schedule_;
    int arms_;
    Step processed_ = 0;
    int arm_ = 0;
};

}  // namespace

EnvironmentBundle make_bandit_tower(const BanditTowerSpec& spec) {
    if (spec.arms.empty()) throw ConfigError("bandit tower needs at least one arm");
    for (double p : spec.arms) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("bandit arm probability outside [0, 1]");
        }
    }
    if (!(spec.eps0 > 0.0)) throw ConfigError("bandit eps0 must be positive");

    int best = 0;
    for (int i = 1; i < static_cast<int>(spec.arms.size()); ++i) {
        if (spec.arms[static_cast<std::size_t>(i)] > spec.arms[static_cast<std::size_t>(best)]) {
            best = i;
        }
    }
    auto schedule =
        std::make_shared<const SweepSchedule>(static_cast<int>(spec.arms.size()), best);

    EnvironmentBundle bundle;
    bundle.name = spec.name;
    bundle.environment = std::make_shared<BanditEnvironment>(spec);
    bundle.metadata.optimal_value = spec.arms[static_cast<std::size_t>(best)];
    bundle.metadata.reference =
        std::make_shared<BanditReferenceRewards>(schedule, spec.arms);
    // Chasing the schedule costs at most a handful of steps (reset plus a
    // climb), so sqrt(k) dominates the catch-up loss at every k that the
    // schedule geometry allows the chase to matter.
    bundle.metadata.d = DecaySpec::sqrt_k(1.0);

    // Post-alignment the loss is a centered sum of Bernoulli deviations.
    // Gaussian-scale constants: variance of the busiest arm, prefactor 0.55
    // (the centered sum exceeds any positive threshold with probability
    // approaching 1/2 from below as eps -> 0, never more).
    double v = 0.05;
    for (double p : spec.arms) v = std::max(v, p * (1.0 - p));
    double phi_scale = 0.55;
    auto phi_fn = [v, phi_scale](Step n, double eps) {
        return phi_scale * std::exp(-static_cast<double>(n) * eps * eps / (2.0 * v));
    };
    bundle.metadata.phi = {phi_fn,
                           exp_sqrt_series_bound(phi_scale, spec.eps0 * spec.eps0 / (2.0 * v))};
    bundle.metadata.epsilon_schedule = polynomial_epsilon_schedule(spec.eps0);

    int arms = static_cast<int>(spec.arms.size());
    bundle.metadata.recovery = [schedule, arms](const History&) -> std::unique_ptr<Policy> {
        return std::make_unique<BanditRecoveryPolicy>(schedule, arms);
    };
    bundle.worst_prefix = [](Step length, RandomSource&) {
        return std::vector<Action>(static_cast<std::size_t>(length), Action{kActionUp});
    };
    return bundle;
}

}  // namespace selfopt::envs
