#include <algorithm>
#include <stdexcept>

#include "selfopt/envs/families.hpp"
#include "selfopt/errors.hpp"

namespace selfopt::envs {

namespace {

constexpr int kActionA = 0;
constexpr int kActionB = 1;

class TrapEnvironment final : public EnvironmentModel {
public:
    explicit TrapEnvironment(TrapSpec spec)
        : spec_(std::move(spec)),
          actions_{{"a", "b"}},
          observations_(trivial_observation_alphabet()) {}

    // The payoff of b at step i depends only on counting statistics of the
    // recorded actions y_<i: the number of a's taken and the longest b run.
    class CountCursor final : public Cursor {
    public:
        explicit CountCursor(const TrapEnvironment* env) : env_(env) {}

        PerceptDistribution distribution(Action action) const override {
            if (action.id == kActionA) return {{Percept{Rational(1), 0}, 1.0}};
            bool unlocked = env_->spec_.s >= 1 && a_count_ >= env_->spec_.s &&
                            longest_run_ > a_count_;
            return {{Percept{Rational(unlocked ? 2 : 0), 0}, 1.0}};
        }

        void advance(Action action, const Percept&) override {
            if (action.id == kActionA) {
                ++a_count_;
                trailing_run_ = 0;
            } else {
                ++trailing_run_;
                longest_run_ = std::max(longest_run_, trailing_run_);
            }
        }

        std::unique_ptr<Cursor> clone() const override {
            return std::make_unique<CountCursor>(*this);
        }

    private:
        const TrapEnvironment* env_;
        Step a_count_ = 0;
        Step longest_run_ = 0;
        Step trailing_run_ = 0;
    };

    const std::string& name() const override { return spec_.name; }
    const Alphabet& action_alphabet() const override { return actions_; }
    const Alphabet& observation_alphabet() const override { return observations_; }
    Rational reward_bound() const override { return Rational(spec_.s >= 1 ? 2 : 1); }

    std::unique_ptr<Cursor> cursor() const override {
        return std::make_unique<CountCursor>(this);
    }

private:
    TrapSpec spec_;
    Alphabet actions_;
    Alphabet observations_;
};

// Optimal play at level s >= 1: a * s (reward 1 each), b * (s+1) (reward 0:
// the run only exceeds the a count once it reaches s+1), then 2 forever.
// Level 0: a forever, reward 1 every step.
class TrapReferenceRewards final : public ReferenceRewards {
public:
    explicit TrapReferenceRewards(int s)
        : ReferenceRewards(s >= 1 ? 2.0 : 1.0), s_(s) {
        total_deviation_ = s >= 1 ? 3.0 * s + 2.0 : 0.0;
    }

    double deviation_budget(Step) const override { return total_deviation_; }

    Step uniform_band_start(Step i_h, double band) const override {
        return band_start_from_total_deviation(i_h, band, total_deviation_);
    }

protected:
    void extend(std::vector<double>& out, Step target) override {
        while (static_cast<Step>(out.size()) < target) {
            Step t = static_cast<Step>(out.size()) + 1;
            if (s_ == 0) {
                out.push_back(1.0);
            } else if (t <= s_) {
                out.push_back(1.0);
            } else if (t <= 2 * static_cast<Step>(s_) + 1) {
                out.push_back(0.0);
            } else {
                out.push_back(2.0);
            }
        }
    }

private:
    int s_;
    double total_deviation_ = 0.0;
};

// Rebuilds the unlock condition from whatever the prefix left behind: top the
// a count up to s if needed, then play b forever (the trailing run eventually
// exceeds the now-frozen a count, after which every b pays 2). Level 0 has no
// unlock; its optimal play is a on every step.
class TrapRecoveryPolicy final : public Policy {
public:
    explicit TrapRecoveryPolicy(int s) : s_(s) {}

    Action act(const History& h) override {
        if (h.length() < processed_) {
            throw std::logic_error("trap recovery policy fed a shrinking history");
        }
        if (s_ == 0) return Action{kActionA};
        for (Step t = processed_ + 1; t <= h.length(); ++t) {
            if (h.action(t).id == kActionA) ++a_count_;
        }
        processed_ = h.length();
        return Action{a_count_ < s_ ? kActionA : kActionB};
    }

private:
    int s_;
    Step processed_ = 0;
    Step a_count_ = 0;
};

}  // namespace

EnvironmentBundle make_trap_environment(const TrapSpec& spec) {
    if (spec.s < 0) throw ConfigError("trap level must be nonnegative");
    if (!(spec.eps0 > 0.0)) throw ConfigError("trap eps0 must be positive");

    EnvironmentBundle bundle;
    bundle.name = spec.name;
    bundle.environment = std::make_shared<TrapEnvironment>(spec);
    bundle.metadata.optimal_value = spec.s >= 1 ? 2.0 : 1.0;
    bundle.metadata.reference = std::make_shared<TrapReferenceRewards>(spec.s);
    // Levels s >= 1 deliberately declare a linear catch-up offset: rebuilding
    // the run after a prefix of k-1 a's takes up to k zero-reward steps, so no
    // o(k) offset is truthful. The pair (d, phi == 0) is sound on windows with
    // n * eps >= 2k; this family exists to break the sublinearity requirement,
    // not to certify at arbitrarily short windows.
    bundle.metadata.d =
        spec.s >= 1 ? DecaySpec::linear_k(1.0) : DecaySpec::constant(1.0);
    bundle.metadata.phi = {[](Step, double) { return 0.0; }, 0.0};
    bundle.metadata.epsilon_schedule = polynomial_epsilon_schedule(spec.eps0);

    int level = spec.s;
    bundle.metadata.recovery = [level](const History&) -> std::unique_ptr<Policy> {
        return std::make_unique<TrapRecoveryPolicy>(level);
    };
    // Worst structured prefix: all a's. It maximizes the frozen a count and
    // with it the length of the zero-reward rebuild.
    bundle.worst_prefix = [](Step length, RandomSource&) {
        return std::vector<Action>(static_cast<std::size_t>(length), Action{kActionA});
    };
    return bundle;
}

}  // namespace selfopt::envs
