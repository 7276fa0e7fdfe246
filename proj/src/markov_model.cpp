#include "riskdp/markov_model.hpp"

#include "riskdp/errors.hpp"
#include "numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <nlohmann/json.hpp>

namespace riskdp {

namespace {

double lerp_clamped(double a, double b, double w) {
    const double v = a + w * (b - a);
    return std::clamp(v, std::min(a, b), std::max(a, b));
}

std::string pair_name(std::size_t s, std::size_t a) {
    return "(state " + std::to_string(s) + ", action " + std::to_string(a) + ")";
}

std::vector<double> symmetric_linspace(double lo, double hi, std::size_t n) {
    std::vector<double> pts(n);
    if (n == 1) {
        pts[0] = lo;
        return pts;
    }
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = 2.0 * static_cast<double>(i) - denom;
        pts[i] = mid + half * (k / denom);
    }
    pts.front() = lo;
    pts.back() = hi;
    return pts;
}

} // namespace

// StateGrid ----------------------------------------------------------------

StateGrid::StateGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty())
        throw DomainError("state grid is empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]))
            throw DomainError("state grid point " + std::to_string(i) + " is not finite");
        if (i > 0 && !(points_[i] > points_[i - 1]))
            throw DomainError("state grid must be strictly increasing at point " +
                              std::to_string(i));
    }
}

StateGrid StateGrid::uniform(double lo, double hi, std::size_t n) {
    if (n < 2)
        throw DomainError("a uniform grid needs at least 2 points");
    if (!(hi > lo))
        throw DomainError("grid upper bound must exceed lower bound");
    return StateGrid(symmetric_linspace(lo, hi, n));
}

std::size_t StateGrid::nearest(double x) const noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (std::abs(points_[i] - x) < std::abs(points_[best] - x))
            best = i;
    return best;
}

// ActionSet ----------------------------------------------------------------

ActionSet::ActionSet(std::vector<double> actions, std::size_t num_states)
    : actions_(std::move(actions)) {
    if (actions_.empty())
        throw DomainError("action set is empty");
    std::vector<std::size_t> all(actions_.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    admissible_.assign(num_states, all);
}

ActionSet::ActionSet(std::vector<double> actions, std::vector<std::vector<std::size_t>> admissible)
    : actions_(std::move(actions)), admissible_(std::move(admissible)) {
    if (actions_.empty())
        throw DomainError("action set is empty");
    for (std::size_t s = 0; s < admissible_.size(); ++s) {
        if (admissible_[s].empty())
            throw DomainError("state " + std::to_string(s) + " has no admissible action");
        for (std::size_t a : admissible_[s])
            if (a >= actions_.size())
                throw DomainError("admissible action index out of range at state " +
                                  std::to_string(s));
    }
}

bool ActionSet::is_admissible(std::size_t state, std::size_t action) const {
    if (state >= admissible_.size())
        return false;
    const auto& adm = admissible_[state];
    return std::find(adm.begin(), adm.end(), action) != adm.end();
}

// MarkovModel --------------------------------------------------------------

MarkovModel::MarkovModel(StateGrid grid, ActionSet actions, TransitionMechanism transition,
                         CostFn cost, double discount)
    : grid_(std::move(grid)), actions_(std::move(actions)), transition_(std::move(transition)),
      cost_fn_(std::move(cost)), discount_(discount) {
    if (!(discount_ > 0.0 && discount_ < 1.0))
        throw DomainError("discount must lie in (0, 1), got " + detail::format_double(discount_));
    if (actions_.num_states() != grid_.size())
        throw DomainError("action set covers " + std::to_string(actions_.num_states()) +
                          " states but the grid has " + std::to_string(grid_.size()));
    if (!cost_fn_)
        throw DomainError("cost function missing");

    const std::size_t ns = grid_.size();
    const std::size_t na = actions_.size();
    cost_table_.assign(ns * na, 0.0);
    succ_table_.assign(ns * na, {});

    if (const auto* kernel = std::get_if<TabularKernel>(&transition_)) {
        if (kernel->rows.size() != ns)
            throw DomainError("kernel has " + std::to_string(kernel->rows.size()) +
                              " state rows, expected " + std::to_string(ns));
        for (std::size_t s = 0; s < ns; ++s)
            if (kernel->rows[s].size() != na)
                throw DomainError("kernel state " + std::to_string(s) + " has " +
                                  std::to_string(kernel->rows[s].size()) +
                                  " action rows, expected " + std::to_string(na));
    } else {
        const auto& dyn = std::get<Dynamics>(transition_);
        if (!dyn.next_state)
            throw DomainError("dynamics next-state function missing");
        if (ns < 2)
            throw DomainError("a dynamics model needs at least 2 grid points");
    }

    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a : actions_.admissible(s)) {
            const double c = cost_fn_(grid_[s], actions_[a]);
            if (!std::isfinite(c) || c < 0.0)
                throw DomainError("cost must be finite and nonnegative at " + pair_name(s, a) +
                                  ", got " + detail::format_double(c));
            cost_table_[s * na + a] = c;

            auto& succ = succ_table_[s * na + a];
            if (const auto* kernel = std::get_if<TabularKernel>(&transition_)) {
                const auto& row = kernel->rows[s][a];
                if (row.size() != ns)
                    throw DomainError("kernel row " + pair_name(s, a) + " has " +
                                      std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(ns));
                double total = 0.0;
                for (std::size_t j = 0; j < ns; ++j) {
                    if (!(row[j] >= 0.0) || !std::isfinite(row[j]))
                        throw DomainError("kernel row " + pair_name(s, a) +
                                          " has a negative or non-finite entry");
                    total += row[j];
                    if (row[j] > 0.0)
                        succ.push_back({j, 0.0, row[j]});
                }
                if (std::abs(total - 1.0) > DiscreteDistribution::kSumTolerance)
                    throw DomainError("kernel row " + pair_name(s, a) + " sums to " +
                                      detail::format_double(total) + ", not 1");
            } else {
                const auto& dyn = std::get<Dynamics>(transition_);
                for (const Atom& n : dyn.noise.atoms()) {
                    const double x = dyn.next_state(grid_[s], actions_[a], n.value);
                    if (!std::isfinite(x))
                        throw DomainError("next state is not finite at " + pair_name(s, a));
                    Successor out{0, 0.0, n.prob};
                    if (x <= grid_.front()) {
                        out.lower = 0;
                    } else if (x >= grid_.back()) {
                        out.lower = ns - 1;
                    } else {
                        const auto& pts = grid_.points();
                        const auto it = std::upper_bound(pts.begin(), pts.end(), x);
                        out.lower = static_cast<std::size_t>(it - pts.begin()) - 1;
                        out.weight = (x - pts[out.lower]) / (pts[out.lower + 1] - pts[out.lower]);
                    }
                    succ.push_back(out);
                }
            }
        }
    }
}

double MarkovModel::cost(std::size_t state, std::size_t action) const {
    if (!actions_.is_admissible(state, action))
        throw DomainError("inadmissible " + pair_name(state, action));
    return cost_table_[state * actions_.size() + action];
}

double MarkovModel::max_cost() const noexcept {
    double m = 0.0;
    for (std::size_t s = 0; s < grid_.size(); ++s)
        for (std::size_t a : actions_.admissible(s))
            m = std::max(m, cost_table_[s * actions_.size() + a]);
    return m;
}

double MarkovModel::next_state(double x, double a, double xi) const {
    const auto* dyn = std::get_if<Dynamics>(&transition_);
    if (!dyn)
        throw DomainError("tabular models have no next-state map");
    return dyn->next_state(x, a, xi);
}

std::span<const Successor> MarkovModel::successors(std::size_t state, std::size_t action) const {
    if (!actions_.is_admissible(state, action))
        throw DomainError("inadmissible " + pair_name(state, action));
    return succ_table_[state * actions_.size() + action];
}

// Free operations ----------------------------------------------------------

NoiseModel quantize_standard_normal(std::size_t K) {
    if (K == 0)
        throw DomainError("noise quantization needs at least one atom");
    const boost::math::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> xs(K);
    for (std::size_t i = 0; i < (K + 1) / 2; ++i) {
        const double p = (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(K));
        xs[i] = (2 * i + 1 == K) ? 0.0 : boost::math::quantile(normal, p);
        xs[K - 1 - i] = -xs[i];
    }
    return DiscreteDistribution::uniform(xs);
}

double interpolate(const StateGrid& grid, std::span<const double> values, double x) {
    if (values.size() != grid.size())
        throw DomainError("value function does not match grid size");
    if (x <= grid.front())
        return values.front();
    if (x >= grid.back())
        return values.back();
    const auto& pts = grid.points();
    const auto it = std::upper_bound(pts.begin(), pts.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - pts.begin()) - 1;
    const double w = (x - pts[k]) / (pts[k + 1] - pts[k]);
    return lerp_clamped(values[k], values[k + 1], w);
}

DiscreteDistribution successor_distribution(const MarkovModel& model, std::size_t state,
                                            std::size_t action, std::span<const double> v_next) {
    if (v_next.size() != model.num_states())
        throw DomainError("value function does not match model size");
    const auto succ = model.successors(state, action);
    std::vector<Atom> atoms;
    atoms.reserve(succ.size());
    for (const Successor& s : succ) {
        const double v = s.weight == 0.0
                             ? v_next[s.lower]
                             : lerp_clamped(v_next[s.lower], v_next[s.lower + 1], s.weight);
        atoms.push_back({v, s.prob});
    }
    return DiscreteDistribution(std::move(atoms));
}

MarkovModel build_investment(const InvestmentParams& p, double discount) {
    if (!(p.sigma > 0.0))
        throw DomainError("investment sigma must be positive");
    if (!(p.C > 0.0))
        throw DomainError("investment action bound C must be positive");
    if (p.noise_atoms < 1)
        throw DomainError("investment noise atom count must be at least 1");
    if (p.wealth_min < 0.0)
        throw DomainError("investment wealth grid lower bound must be nonnegative");
    if (p.action_count < 1)
        throw DomainError("investment action count must be at least 1");

    StateGrid grid = StateGrid::uniform(p.wealth_min, p.wealth_max, p.grid_points);
    std::vector<double> acts = p.action_count == 1 ? std::vector<double>{0.0}
                                                   : symmetric_linspace(-p.C, p.C, p.action_count);
    const double lo = grid.front();
    const double hi = grid.back();
    const double mu = p.mu;
    const double r = p.r;
    const double sigma = p.sigma;
    NextStateFn next = [=](double x, double a, double xi) {
        return std::clamp(x * (1.0 + r + (mu - r) * a + sigma * a * xi), lo, hi);
    };
    CostFn cost = [](double x, double) { return x; };
    const std::size_t ns = grid.size();
    return MarkovModel(std::move(grid), ActionSet(std::move(acts), ns),
                       Dynamics{std::move(next), quantize_standard_normal(p.noise_atoms)},
                       std::move(cost), discount);
}

MarkovModel build_lq(const LQParams& p, double discount) {
    if (!(p.sigma > 0.0))
        throw DomainError("LQ sigma must be positive");
    if (!(p.C > 0.0))
        throw DomainError("LQ action bound C must be positive");
    if (p.noise_atoms < 1)
        throw DomainError("LQ noise atom count must be at least 1");
    if (p.action_count < 1)
        throw DomainError("LQ action count must be at least 1");

    StateGrid grid = StateGrid::uniform(p.state_min, p.state_max, p.grid_points);
    std::vector<double> acts = p.action_count == 1 ? std::vector<double>{0.0}
                                                   : symmetric_linspace(-p.C, p.C, p.action_count);
    const double lo = grid.front();
    const double hi = grid.back();
    const double sigma = p.sigma;
    NextStateFn next = [=](double x, double a, double xi) {
        return std::clamp(x + a + sigma * xi, lo, hi);
    };
    CostFn cost = [](double x, double a) { return x * x + a * a; };
    const std::size_t ns = grid.size();
    return MarkovModel(std::move(grid), ActionSet(std::move(acts), ns),
                       Dynamics{std::move(next), quantize_standard_normal(p.noise_atoms)},
                       std::move(cost), discount);
}

MarkovModel build_tabular(TabularKernel kernel, const std::vector<std::vector<double>>& costs,
                          double discount) {
    const std::size_t ns = kernel.rows.size();
    if (ns == 0)
        throw DomainError("tabular model has no states");
    const std::size_t na = kernel.rows.front().size();
    if (costs.size() != ns)
        throw DomainError("cost table has " + std::to_string(costs.size()) + " rows, expected " +
                          std::to_string(ns));
    for (std::size_t s = 0; s < ns; ++s)
        if (costs[s].size() != na)
            throw DomainError("cost row " + std::to_string(s) + " has " +
                              std::to_string(costs[s].size()) + " entries, expected " +
                              std::to_string(na));

    std::vector<double> states(ns);
    std::vector<double> acts(na);
    for (std::size_t i = 0; i < ns; ++i)
        states[i] = static_cast<double>(i);
    for (std::size_t i = 0; i < na; ++i)
        acts[i] = static_cast<double>(i);
    CostFn cost = [costs](double x, double a) {
        return costs[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
    };
    return MarkovModel(StateGrid(std::move(states)), ActionSet(std::move(acts), ns),
                       std::move(kernel), std::move(cost), discount);
}

MarkovModel parse_tabular_json(const std::string& text, double discount) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("tabular model: ") + e.what());
    }
    try {
        const auto ns = doc.at("states").get<std::size_t>();
        const auto na = doc.at("actions").get<std::size_t>();
        TabularKernel kernel;
        kernel.rows = doc.at("kernel").get<std::vector<std::vector<std::vector<double>>>>();
        auto costs = doc.at("costs").get<std::vector<std::vector<double>>>();
        if (kernel.rows.size() != ns)
            throw ConfigError("tabular model: kernel has " + std::to_string(kernel.rows.size()) +
                              " state rows but states = " + std::to_string(ns));
        for (const auto& r : kernel.rows)
            if (r.size() != na)
                throw ConfigError("tabular model: kernel action rows do not match actions = " +
                                  std::to_string(na));
        return build_tabular(std::move(kernel), costs, discount);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("tabular model: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("tabular model: ") + e.what());
    }
}

MarkovModel load_tabular_json(const std::string& path, double discount) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open tabular model '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tabular_json(ss.str(), discount);
}

std::size_t nearest_action(const MarkovModel& model, double value) {
    const auto& acts = model.actions().values();
    std::size_t best = 0;
    for (std::size_t i = 1; i < acts.size(); ++i)
        if (std::abs(acts[i] - value) < std::abs(acts[best] - value))
            best = i;
    return best;
}

} // namespace riskdp
