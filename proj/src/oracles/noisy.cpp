#include "noveltree/oracles/noisy.hpp"

#include "noveltree/errors.hpp"

namespace noveltree::oracles {

ErrorModel ErrorModel::uniform(double rate, std::uint64_t seed) {
    return ErrorModel{rate, rate, rate, rate, seed};
}

void ErrorModel::validate() const {
    for (double p : {invalid_action, wrong_successor, false_novelty, verifier_flip})
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("error rates must lie in [0, 1]");
}

namespace {

tot::YesNo flip(tot::YesNo v) {
    if (v == tot::YesNo::yes) return tot::YesNo::no;
    if (v == tot::YesNo::no) return tot::YesNo::yes;
    return v;
}

class NoisyActions : public tot::ActionOracle {
public:
    NoisyActions(std::shared_ptr<tot::ActionOracle> inner, double p, std::uint64_t seed, std::shared_ptr<Simulator> sim)
        : inner_(std::move(inner)), p_(p), rng_(seed), sim_(std::move(sim)) {}

    std::vector<tot::Answer<std::string>> sample_actions(const tot::Thought &parent, int m) override {
        auto out = inner_->sample_actions(parent, m);
        for (auto &a : out) {
            const double u = rng_.unit();
            Rng pick(rng_.next());
            if (!a.value || u >= p_) continue;
            if (auto bad = sim_->random_inadmissible(parent, pick)) a.value = *bad;
        }
        return out;
    }

private:
    std::shared_ptr<tot::ActionOracle> inner_;
    double p_;
    Rng rng_;
    std::shared_ptr<Simulator> sim_;
};

class NoisySuccessor : public tot::SuccessorOracle {
public:
    NoisySuccessor(std::shared_ptr<tot::SuccessorOracle> inner, double p, std::uint64_t seed,
                   std::shared_ptr<Simulator> sim)
        : inner_(std::move(inner)), p_(p), rng_(seed), sim_(std::move(sim)) {}

    tot::Answer<tot::Thought> successor(const tot::Thought &parent, const std::string &action) override {
        auto answer = inner_->successor(parent, action);
        const double u = rng_.unit();
        Rng pick(rng_.next());
        if (answer.value && u < p_) answer.value = sim_->perturb(*answer.value, pick);
        return answer;
    }

private:
    std::shared_ptr<tot::SuccessorOracle> inner_;
    double p_;
    Rng rng_;
    std::shared_ptr<Simulator> sim_;
};

class NoisyThoughts : public tot::ThoughtOracle {
public:
    NoisyThoughts(std::shared_ptr<tot::ThoughtOracle> inner, const ErrorModel &model, std::uint64_t seed,
                  std::shared_ptr<Simulator> sim)
        : inner_(std::move(inner)), model_(model), rng_(seed), sim_(std::move(sim)) {}

    std::vector<tot::Answer<tot::Step>> sample_steps(const tot::Thought &parent, int m) override {
        auto out = inner_->sample_steps(parent, m);
        for (auto &a : out) {
            const double u_action = rng_.unit();
            const double u_state = rng_.unit();
            Rng pick(rng_.next());
            if (!a.value) continue;
            if (u_action < model_.invalid_action) {
                if (auto bad = sim_->random_inadmissible(parent, pick)) a.value->action = *bad;
            }
            if (u_state < model_.wrong_successor) a.value->thought = sim_->perturb(a.value->thought, pick);
        }
        return out;
    }

private:
    std::shared_ptr<tot::ThoughtOracle> inner_;
    ErrorModel model_;
    Rng rng_;
    std::shared_ptr<Simulator> sim_;
};

class NoisyVerifier : public tot::VerifierOracle {
public:
    NoisyVerifier(std::shared_ptr<tot::VerifierOracle> inner, double p, std::uint64_t seed)
        : inner_(std::move(inner)), p_(p), rng_(seed) {}

    tot::Answer<tot::YesNo> is_goal(const tot::Thought &thought) override {
        auto answer = inner_->is_goal(thought);
        if (rng_.unit() < p_ && answer.value) answer.value = flip(*answer.value);
        return answer;
    }

private:
    std::shared_ptr<tot::VerifierOracle> inner_;
    double p_;
    Rng rng_;
};

class NoisyNovelty : public tot::NoveltyOracle {
public:
    NoisyNovelty(std::shared_ptr<tot::NoveltyOracle> inner, double p, std::uint64_t seed)
        : inner_(std::move(inner)), p_(p), rng_(seed) {}

    tot::Answer<tot::YesNo> is_novel(const tot::Thought &candidate, const std::vector<tot::Thought> &history) override {
        auto answer = inner_->is_novel(candidate, history);
        if (rng_.unit() < p_ && answer.value) answer.value = flip(*answer.value);
        return answer;
    }

private:
    std::shared_ptr<tot::NoveltyOracle> inner_;
    double p_;
    Rng rng_;
};

} // namespace

tot::OracleSet noisy(const tot::OracleSet &inner, const ErrorModel &model, std::shared_ptr<Simulator> sim) {
    model.validate();
    if (!sim) throw ConfigError("noisy oracles need a simulator");
    tot::OracleSet out;
    if (inner.action) out.action = std::make_shared<NoisyActions>(inner.action, model.invalid_action, mix_seed(model.seed, 1), sim);
    if (inner.successor)
        out.successor = std::make_shared<NoisySuccessor>(inner.successor, model.wrong_successor, mix_seed(model.seed, 2), sim);
    if (inner.thought) out.thought = std::make_shared<NoisyThoughts>(inner.thought, model, mix_seed(model.seed, 3), sim);
    if (inner.verifier)
        out.verifier = std::make_shared<NoisyVerifier>(inner.verifier, model.verifier_flip, mix_seed(model.seed, 4));
    if (inner.novelty)
        out.novelty = std::make_shared<NoisyNovelty>(inner.novelty, model.false_novelty, mix_seed(model.seed, 5));
    return out;
}

} // namespace noveltree::oracles
