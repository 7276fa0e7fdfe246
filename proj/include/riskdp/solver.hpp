#pragma once

// Risk-averse dynamic programming on a MarkovModel.
//
// The Bellman operator is
//   (T v)(x) = min_a  cost(x, a) + beta * rho( v(next state) ),
// with rho a static coherent risk measure applied to the successor
// distribution of (x, a). Finite-horizon problems are solved by backward
// induction from a zero terminal value; the infinite-horizon value is the
// monotone limit of those finite-horizon values.

#include "riskdp/markov_model.hpp"
#include "riskdp/risk_measures.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace riskdp {

using ValueFunction = std::vector<double>;

/// Action index chosen at every state for one stage.
using StagePolicy = std::vector<std::size_t>;

/// Deterministic Markov policy. When `repeat_last` is set the last decision
/// rule applies to every later stage, so a single stage is a stationary policy.
struct Policy {
    std::vector<StagePolicy> stages;
    bool repeat_last = true;

    static Policy stationary(StagePolicy rule) { return Policy{{std::move(rule)}, true}; }

    /// Decision rule at `stage`; throws DomainError if none is defined.
    const StagePolicy& at(std::size_t stage) const;
};

struct BellmanResult {
    ValueFunction values;
    StagePolicy policy;
};

struct BackwardInduction {
    /// stage_values[n] = J_n, n = 0..N; J_0 is the N-horizon optimal value.
    std::vector<ValueFunction> stage_values;
    std::vector<StagePolicy> stage_policies;
};

enum class SolveStatus { Converged, NotConverged };

struct SolveReport {
    SolveStatus status = SolveStatus::NotConverged;
    std::size_t sweeps = 0;
    /// v_0 = 0 followed by the iterate after each sweep.
    std::vector<ValueFunction> values_per_iteration;
    /// residuals[k] = max_x (v_{k+1}(x) - v_k(x)).
    std::vector<double> residuals;
    std::size_t horizon = 0; // N0
    double epsilon = 0.0;
    double tail_bound = 0.0;
    Policy policy;
    ValueFunction converged_value;

    double last_residual() const noexcept { return residuals.empty() ? 0.0 : residuals.back(); }
};

struct EpsilonHorizon {
    std::size_t n0 = 0;
    /// c_bar * beta^(n0 + 1) / (1 - beta), strictly below epsilon.
    double tail = 0.0;
};

/// One application of the risk-averse Bellman operator. Ties go to the
/// lowest action index.
BellmanResult bellman_update(const MarkovModel& model, const RiskSpec& risk,
                             std::span<const double> v_next);

/// J_N, ..., J_0 from J_{N+1} = 0, indexed by stage.
BackwardInduction backward_induct(const MarkovModel& model, const RiskSpec& risk, std::size_t N);

/// Iterates the Bellman operator from zero until residual * beta / (1 - beta)
/// drops below `tol` or `max_sweeps` is reached. The returned policy is the
/// greedy stationary policy for the last iterate.
SolveReport value_iterate(const MarkovModel& model, const RiskSpec& risk, double tol,
                          std::size_t max_sweeps);

/// Smallest N0 with c_bar * beta^(N0 + 1) / (1 - beta) < epsilon.
EpsilonHorizon epsilon_horizon(double c_bar, double discount, double epsilon);

/// Decision rules 0..n0 from `dp_policies`, then `base` for every later stage.
Policy assemble_epsilon_policy(std::span<const StagePolicy> dp_policies, std::size_t n0,
                               const StagePolicy& base);

/// Nested value of a fixed policy over stages 0..N with zero terminal value.
ValueFunction evaluate_policy(const MarkovModel& model, const RiskSpec& risk, const Policy& policy,
                              std::size_t N);

/// True iff v >= T v pointwise (within 1e-12), which certifies v >= V*.
bool supersolution_check(std::span<const double> v, const MarkovModel& model,
                         const RiskSpec& risk);

struct EpsilonSolveOptions {
    double tolerance = 1e-6;
    std::size_t max_sweeps = 1000;
    double epsilon = 0.1;
    /// Per-stage bound on the base policy's cost contribution.
    double c_bar = 0.0;
};

/// Value iteration followed by epsilon-optimal assembly: backward induction
/// up to the epsilon horizon, then `base` forever. Without a base policy the
/// greedy stationary policy of the converged value is used.
SolveReport solve_epsilon_optimal(const MarkovModel& model, const RiskSpec& risk,
                                  const std::optional<StagePolicy>& base,
                                  const EpsilonSolveOptions& options);

} // namespace riskdp
