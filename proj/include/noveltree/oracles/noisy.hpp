#pragma once

#include "noveltree/oracles/simulator.hpp"
#include "noveltree/tot/engine.hpp"

#include <cstdint>
#include <memory>

namespace noveltree::oracles {

struct ErrorModel {
    double invalid_action = 0.0;
    double wrong_successor = 0.0;
    double false_novelty = 0.0;
    double verifier_flip = 0.0;
    std::uint64_t seed = 0;

    // Every rate set to `rate`.
    static ErrorModel uniform(double rate, std::uint64_t seed);
    void validate() const;
};

// Wraps each sub-task oracle of `inner`. One uniform draw is made per decision
// regardless of the rate, so runs at different rates see the same draws.
// The simulator supplies inadmissible actions and state perturbations.
tot::OracleSet noisy(const tot::OracleSet &inner, const ErrorModel &model, std::shared_ptr<Simulator> sim);

} // namespace noveltree::oracles
