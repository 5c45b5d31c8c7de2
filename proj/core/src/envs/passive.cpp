#include <stdexcept>

#include "selfopt/envs/families.hpp"
#include "selfopt/errors.hpp"

namespace selfopt::envs {

namespace {

// Eventually periodic binary stream: preamble, then pattern repeated forever.
struct Stream {
    std::vector<int> preamble;
    std::vector<int> pattern;

    int at(Step t) const {  // 1-based
        auto p = static_cast<Step>(preamble.size());
        if (t <= p) return preamble[static_cast<std::size_t>(t - 1)];
        return pattern[static_cast<std::size_t>((t - p - 1) %
                                                static_cast<Step>(pattern.size()))];
    }
};

class PassiveEnvironment final : public EnvironmentModel {
public:
    PassiveEnvironment(PassiveSpec spec, Stream stream)
        : spec_(std::move(spec)),
          stream_(std::move(stream)),
          actions_{{"0", "1"}},
          observations_{{"0", "1"}} {}

    // Observations ignore actions entirely; the reward at step t scores the
    // action of step t-1 against the observation of step t (first step free).
    class StreamCursor final : public Cursor {
    public:
        explicit StreamCursor(const PassiveEnvironment* env) : env_(env) {}

        PerceptDistribution distribution(Action) const override {
            int obs = env_->stream_.at(t_);
            bool hit = t_ == 1 || prev_action_ == obs;
            return {{Percept{Rational(hit ? 1 : 0), obs}, 1.0}};
        }

        void advance(Action action, const Percept&) override {
            prev_action_ = action.id;
            ++t_;
        }

        std::unique_ptr<Cursor> clone() const override {
            return std::make_unique<StreamCursor>(*this);
        }

    private:
        const PassiveEnvironment* env_;
        Step t_ = 1;
        int prev_action_ = -1;
    };

    const std::string& name() const override { return spec_.name; }
    const Alphabet& action_alphabet() const override { return actions_; }
    const Alphabet& observation_alphabet() const override { return observations_; }
    Rational reward_bound() const override { return Rational(1); }

    std::unique_ptr<Cursor> cursor() const override {
        return std::make_unique<StreamCursor>(this);
    }

    const Stream& stream() const { return stream_; }

private:
    PassiveSpec spec_;
    Stream stream_;
    Alphabet actions_;
    Alphabet observations_;
};

// The clairvoyant predictor scores every step, so the reference sequence is
// identically 1 and carries no deviation at all.
class PassiveReferenceRewards final : public ReferenceRewards {
public:
    PassiveReferenceRewards() : ReferenceRewards(1.0) {}

    double deviation_budget(Step) const override { return 0.0; }

    Step uniform_band_start(Step i_h, double band) const override {
        return band_start_from_total_deviation(i_h, band, 0.0);
    }

protected:
    void extend(std::vector<double>& out, Step target) override {
        while (static_cast<Step>(out.size()) < target) out.push_back(1.0);
    }
};

}  // namespace

EnvironmentBundle make_passive_environment(const PassiveSpec& spec) {
    if (spec.pattern.empty()) throw ConfigError("passive pattern must be nonempty");
    for (int symbol : spec.pattern) {
        if (symbol != 0 && symbol != 1) throw ConfigError("passive pattern symbols must be 0/1");
    }
    for (int symbol : spec.preamble) {
        if (symbol != 0 && symbol != 1) throw ConfigError("passive preamble symbols must be 0/1");
    }
    if (!(spec.eps0 > 0.0)) throw ConfigError("passive eps0 must be positive");

    Stream stream{spec.preamble, spec.pattern};
    EnvironmentBundle bundle;
    bundle.name = spec.name;
    bundle.environment = std::make_shared<PassiveEnvironment>(spec, stream);
    bundle.metadata.optimal_value = 1.0;
    bundle.metadata.reference = std::make_shared<PassiveReferenceRewards>();
    // After any prefix, predicting the next symbol recovers every reward from
    // the second window step on; only the score of the prefix's final action
    // can be lost. Hence a constant offset of 1 and a tail that never fires.
    bundle.metadata.d = DecaySpec::constant(1.0);
    bundle.metadata.phi = {[](Step, double) { return 0.0; }, 0.0};
    bundle.metadata.epsilon_schedule = polynomial_epsilon_schedule(spec.eps0);
    bundle.metadata.recovery = [stream](const History&) -> std::unique_ptr<Policy> {
        return make_policy([stream](const History& h) {
            return Action{stream.at(h.length() + 2)};  // score at step len+2
        });
    };
    // Worst structured prefix: anti-predict every upcoming symbol.
    bundle.worst_prefix = [stream](Step length, RandomSource&) {
        std::vector<Action> actions;
        actions.reserve(static_cast<std::size_t>(length));
        for (Step t = 1; t <= length; ++t) actions.push_back(Action{1 - stream.at(t + 1)});
        return actions;
    };
    return bundle;
}

}  // namespace selfopt::envs
