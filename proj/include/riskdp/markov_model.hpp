#pragma once

// Stationary controlled Markov models on finite state grids.
//
// A model is either tabular (explicit kernel rows over state indices) or
// given by a dynamics map x' = F(x, a, xi) driven by quantized noise, with
// off-grid successors valued by clamped linear interpolation.

#include "riskdp/risk_measures.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riskdp {

/// Strictly increasing sequence of state coordinates.
class StateGrid {
  public:
    explicit StateGrid(std::vector<double> points);

    /// n points spanning [lo, hi]. When lo == -hi the points are exactly
    /// symmetric about 0 (and contain 0 for odd n).
    static StateGrid uniform(double lo, double hi, std::size_t n);

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    const std::vector<double>& points() const noexcept { return points_; }
    double front() const noexcept { return points_.front(); }
    double back() const noexcept { return points_.back(); }

    /// Index of the grid point closest to x.
    std::size_t nearest(double x) const noexcept;

  private:
    std::vector<double> points_;
};

/// Action values plus the admissible subset at every state.
class ActionSet {
  public:
    /// All actions admissible at each of `num_states` states.
    ActionSet(std::vector<double> actions, std::size_t num_states);
    ActionSet(std::vector<double> actions, std::vector<std::vector<std::size_t>> admissible);

    std::size_t size() const noexcept { return actions_.size(); }
    double operator[](std::size_t i) const { return actions_[i]; }
    const std::vector<double>& values() const noexcept { return actions_; }
    const std::vector<std::size_t>& admissible(std::size_t state) const {
        return admissible_.at(state);
    }
    bool is_admissible(std::size_t state, std::size_t action) const;
    std::size_t num_states() const noexcept { return admissible_.size(); }

  private:
    std::vector<double> actions_;
    std::vector<std::vector<std::size_t>> admissible_;
};

using NoiseModel = DiscreteDistribution;

/// kernel[s][a][j] = P(next = j | state s, action a).
struct TabularKernel {
    std::vector<std::vector<std::vector<double>>> rows;
};

using NextStateFn = std::function<double(double x, double a, double xi)>;
using CostFn = std::function<double(double x, double a)>;

struct Dynamics {
    NextStateFn next_state;
    NoiseModel noise;
};

using TransitionMechanism = std::variant<TabularKernel, Dynamics>;

enum class Boundary { Clamp };

/// Successor reached with probability `prob`, valued as the clamped linear
/// interpolation between grid nodes `lower` and `lower + 1` at fraction `weight`.
/// Tabular successors have weight 0.
struct Successor {
    std::size_t lower = 0;
    double weight = 0.0;
    double prob = 0.0;
};

class MarkovModel {
  public:
    MarkovModel(StateGrid grid, ActionSet actions, TransitionMechanism transition, CostFn cost,
                double discount);

    const StateGrid& grid() const noexcept { return grid_; }
    const ActionSet& actions() const noexcept { return actions_; }
    const TransitionMechanism& transition() const noexcept { return transition_; }
    double discount() const noexcept { return discount_; }
    Boundary boundary() const noexcept { return Boundary::Clamp; }
    bool is_tabular() const noexcept { return std::holds_alternative<TabularKernel>(transition_); }

    std::size_t num_states() const noexcept { return grid_.size(); }
    std::size_t num_actions() const noexcept { return actions_.size(); }

    /// Stage cost at grid state `state` under action index `action`.
    double cost(std::size_t state, std::size_t action) const;
    /// Stage cost at an arbitrary (x, a).
    double cost_at(double x, double a) const { return cost_fn_(x, a); }
    /// Largest stage cost over admissible pairs.
    double max_cost() const noexcept;

    /// Next state for a dynamics model; throws DomainError for tabular models.
    double next_state(double x, double a, double xi) const;

    std::span<const Successor> successors(std::size_t state, std::size_t action) const;

  private:
    StateGrid grid_;
    ActionSet actions_;
    TransitionMechanism transition_;
    CostFn cost_fn_;
    double discount_;
    std::vector<double> cost_table_;               // [s * |A| + a]
    std::vector<std::vector<Successor>> succ_table_; // [s * |A| + a]
};

struct InvestmentParams {
    double mu = 0.05;
    double r = 0.0;
    double sigma = 0.2;
    double C = 1.0;
    double wealth_min = 0.0;
    double wealth_max = 2.0;
    std::size_t grid_points = 21;
    std::size_t action_count = 5;
    std::size_t noise_atoms = 5;
    double x0 = 1.0;
};

struct LQParams {
    double sigma = 1.0;
    double C = 2.0;
    double state_min = -3.0;
    double state_max = 3.0;
    std::size_t grid_points = 41;
    std::size_t action_count = 9;
    std::size_t noise_atoms = 5;
    double x0 = 1.0;
};

/// K equal-weight atoms at the standard-normal quantiles of (2i - 1) / (2K).
NoiseModel quantize_standard_normal(std::size_t K);

/// Piecewise-linear interpolation of grid values at x, clamped to the
/// boundary values outside the grid range.
double interpolate(const StateGrid& grid, std::span<const double> values, double x);

/// Distribution of the next-stage value reached from (state, action).
DiscreteDistribution successor_distribution(const MarkovModel& model, std::size_t state,
                                            std::size_t action, std::span<const double> v_next);

/// Wealth x' = x (1 + r + (mu - r) a + sigma a xi), clamped to the grid; cost = x.
MarkovModel build_investment(const InvestmentParams& p, double discount);

/// Scalar linear system x' = x + a + sigma xi, clamped to the grid; cost = x^2 + a^2.
MarkovModel build_lq(const LQParams& p, double discount);

/// Tabular model with kernel[s][a][j] and costs[s][a]; states are indices 0..n-1.
MarkovModel build_tabular(TabularKernel kernel, const std::vector<std::vector<double>>& costs,
                          double discount);

/// Parses {"states": n, "actions": m, "kernel": [[[p...]]], "costs": [[c...]]}.
MarkovModel parse_tabular_json(const std::string& text, double discount);
MarkovModel load_tabular_json(const std::string& path, double discount);

/// Index of the action whose value is closest to `value`.
std::size_t nearest_action(const MarkovModel& model, double value);

} // namespace riskdp
