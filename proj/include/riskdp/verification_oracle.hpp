#pragma once

// Brute-force re-derivations of solver and risk-measure outputs on tiny
// instances. Nothing here calls into the solver; the code paths are kept
// separate so that agreement is evidence rather than tautology.

#include "riskdp/markov_model.hpp"
#include "riskdp/risk_measures.hpp"
#include "riskdp/solver.hpp"

#include <cstddef>
#include <vector>

namespace riskdp::oracle {

inline constexpr std::size_t kNodeBudget = 1'000'000;
inline constexpr std::size_t kPolicyBudget = 1'000'000;
inline constexpr std::size_t kLpAtomBudget = 12;

struct ScenarioNode {
    std::size_t state = 0;
    std::size_t stage = 0;
    double cost = 0.0;
    /// (probability, child node index)
    std::vector<std::pair<double, std::size_t>> children;
};

/// Explicit unrolling of a tabular model under a fixed policy; nodes[0] is the root.
struct ScenarioTree {
    std::size_t depth = 0;
    std::vector<ScenarioNode> nodes;
};

/// Builds the tree from `initial_state`; throws ResourceError past kNodeBudget nodes.
ScenarioTree build_scenario_tree(const MarkovModel& model, const Policy& policy, std::size_t depth,
                                 std::size_t initial_state);

/// value(node) = cost + beta * rho(children's values); returns the root value.
double scenario_tree_value(const ScenarioTree& tree, const RiskSpec& risk, double discount);

double scenario_tree_value(const MarkovModel& model, const RiskSpec& risk, const Policy& policy,
                           std::size_t depth, std::size_t initial_state);

/// Discounted expected cost by summing over every path with its probability.
double path_expectation_value(const MarkovModel& model, const Policy& policy, std::size_t depth,
                              std::size_t initial_state);

struct ExhaustiveResult {
    ValueFunction best_value;       // per initial state
    std::vector<Policy> best_policy; // per initial state, stages 0..depth
    std::size_t policies_enumerated = 0;
};

/// Number of Markov deterministic policies over stages 0..depth, saturating
/// at SIZE_MAX.
std::size_t policy_count(const MarkovModel& model, std::size_t depth);

/// Minimum over every Markov deterministic policy sequence of the nested
/// objective. Policies sharing a suffix share that suffix's nested values.
ExhaustiveResult exhaustive_policy_search(const MarkovModel& model, const RiskSpec& risk,
                                          std::size_t depth);

/// Same minimum, evaluating every policy separately with an explicit
/// scenario tree. Much slower; for cross-checking on the smallest instances.
ExhaustiveResult exhaustive_policy_search_by_tree(const MarkovModel& model, const RiskSpec& risk,
                                                  std::size_t depth);

/// AV@R by enumerating the vertices of {0 <= m <= 1/(1-alpha), E[m] = 1}.
double avar_lp_oracle(double alpha, const DiscreteDistribution& dist);

/// Vertex enumeration with an explicit density cap.
double density_lp_oracle(double cap, const DiscreteDistribution& dist);

/// Plain expected-cost backward induction; returns the stage-0 value.
ValueFunction risk_neutral_dp(const MarkovModel& model, std::size_t N);

} // namespace riskdp::oracle
