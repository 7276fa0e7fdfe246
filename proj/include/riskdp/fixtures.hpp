#pragma once

// Seeded random instances shared by the verify command and the test suites.

#include "riskdp/markov_model.hpp"
#include "riskdp/risk_measures.hpp"
#include "riskdp/solver.hpp"

#include <cstddef>
#include <random>

namespace riskdp::fixtures {

using Rng = std::mt19937_64;

/// 1..max_atoms atoms, values in [-10, 10] (about a fifth rounded to
/// integers so that ties occur), positive probabilities summing to one.
DiscreteDistribution random_distribution(Rng& rng, std::size_t max_atoms);

/// Positive probabilities for n atoms, normalized.
std::vector<double> random_probabilities(Rng& rng, std::size_t n);

/// Dense-ish random kernel (roughly 30% structural zeros, never an empty
/// row) and costs uniform in [0, 10].
MarkovModel random_tabular_model(Rng& rng, std::size_t num_states, std::size_t num_actions,
                                 double discount);

/// Independent uniformly chosen admissible action per state and stage 0..depth.
Policy random_policy(Rng& rng, const MarkovModel& model, std::size_t depth);

} // namespace riskdp::fixtures
