#include "riskdp/verification_oracle.hpp"

#include "riskdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskdp::oracle {

namespace {

const TabularKernel& require_tabular(const MarkovModel& model) {
    const auto* kernel = std::get_if<TabularKernel>(&model.transition());
    if (!kernel)
        throw DomainError("scenario-tree oracles need a tabular model");
    return *kernel;
}

// All decision rules, i.e. the product of the admissible action sets.
std::vector<StagePolicy> all_rules(const MarkovModel& model) {
    std::vector<StagePolicy> rules{StagePolicy{}};
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        std::vector<StagePolicy> next;
        for (const auto& partial : rules)
            for (std::size_t a : model.actions().admissible(s)) {
                auto r = partial;
                r.push_back(a);
                next.push_back(std::move(r));
            }
        rules = std::move(next);
    }
    return rules;
}

Policy decode_policy(std::size_t index, const std::vector<StagePolicy>& rules, std::size_t depth) {
    Policy p;
    p.repeat_last = false;
    for (std::size_t k = 0; k <= depth; ++k) {
        p.stages.push_back(rules[index % rules.size()]);
        index /= rules.size();
    }
    return p;
}

void check_budget(const MarkovModel& model, std::size_t depth) {
    const std::size_t n = policy_count(model, depth);
    if (n > kPolicyBudget)
        throw ResourceError("exhaustive search over " +
                            (n == std::numeric_limits<std::size_t>::max() ? std::string("> 2^64")
                                                                          : std::to_string(n)) +
                            " policies exceeds the budget of " + std::to_string(kPolicyBudget));
}

ExhaustiveResult reduce_min(const std::vector<ValueFunction>& values,
                            const std::vector<StagePolicy>& rules, std::size_t depth,
                            std::size_t ns) {
    ExhaustiveResult out;
    out.policies_enumerated = values.size();
    out.best_value.assign(ns, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> arg(ns, 0);
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t s = 0; s < ns; ++s)
            if (values[i][s] < out.best_value[s]) {
                out.best_value[s] = values[i][s];
                arg[s] = i;
            }
    for (std::size_t s = 0; s < ns; ++s)
        out.best_policy.push_back(decode_policy(arg[s], rules, depth));
    return out;
}

} // namespace

ScenarioTree build_scenario_tree(const MarkovModel& model, const Policy& policy, std::size_t depth,
                                 std::size_t initial_state) {
    const auto& kernel = require_tabular(model);
    if (initial_state >= model.num_states())
        throw DomainError("initial state out of range");
    ScenarioTree tree;
    tree.depth = depth;
    tree.nodes.push_back({initial_state, 0, 0.0, {}});
    // nodes are appended breadth-first, so a single forward pass expands them all
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const std::size_t s = tree.nodes[i].state;
        const std::size_t stage = tree.nodes[i].stage;
        const auto& rule = policy.at(stage);
        if (rule.size() != model.num_states())
            throw DomainError("decision rule size does not match the model");
        const std::size_t a = rule[s];
        tree.nodes[i].cost = model.cost_at(model.grid()[s], model.actions()[a]);
        if (!model.actions().is_admissible(s, a))
            throw DomainError("policy picks an inadmissible action");
        if (stage == depth)
            continue;
        const auto& row = kernel.rows[s][a];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] <= 0.0)
                continue;
            if (tree.nodes.size() >= kNodeBudget)
                throw ResourceError("scenario tree exceeds " + std::to_string(kNodeBudget) +
                                    " nodes");
            tree.nodes[i].children.emplace_back(row[j], tree.nodes.size());
            tree.nodes.push_back({j, stage + 1, 0.0, {}});
        }
    }
    return tree;
}

double scenario_tree_value(const ScenarioTree& tree, const RiskSpec& risk, double discount) {
    // children always have larger indices than their parent
    std::vector<double> value(tree.nodes.size(), 0.0);
    for (std::size_t i = tree.nodes.size(); i-- > 0;) {
        const auto& node = tree.nodes[i];
        value[i] = node.cost;
        if (node.children.empty())
            continue;
        std::vector<Atom> atoms;
        atoms.reserve(node.children.size());
        for (const auto& [p, c] : node.children)
            atoms.push_back({value[c], p});
        value[i] += discount * evaluate(risk, DiscreteDistribution(std::move(atoms)));
    }
    return value.at(0);
}

double scenario_tree_value(const MarkovModel& model, const RiskSpec& risk, const Policy& policy,
                           std::size_t depth, std::size_t initial_state) {
    return scenario_tree_value(build_scenario_tree(model, policy, depth, initial_state), risk,
                               model.discount());
}

double path_expectation_value(const MarkovModel& model, const Policy& policy, std::size_t depth,
                              std::size_t initial_state) {
    const auto& kernel = require_tabular(model);
    // depth-first walk over paths carrying (state, stage, path probability)
    struct Frame {
        std::size_t state;
        std::size_t stage;
        double prob;
    };
    std::vector<Frame> stack{{initial_state, 0, 1.0}};
    double total = 0.0;
    std::size_t visited = 0;
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (++visited > kNodeBudget)
            throw ResourceError("path enumeration exceeds " + std::to_string(kNodeBudget) +
                                " nodes");
        const std::size_t a = policy.at(f.stage).at(f.state);
        total += f.prob * std::pow(model.discount(), static_cast<double>(f.stage)) *
                 model.cost_at(model.grid()[f.state], model.actions()[a]);
        if (f.stage == depth)
            continue;
        const auto& row = kernel.rows[f.state][a];
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] > 0.0)
                stack.push_back({j, f.stage + 1, f.prob * row[j]});
    }
    return total;
}

std::size_t policy_count(const MarkovModel& model, std::size_t depth) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    std::size_t per_stage = 1;
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        const std::size_t k = model.actions().admissible(s).size();
        if (per_stage > kMax / k)
            return kMax;
        per_stage *= k;
    }
    std::size_t total = 1;
    for (std::size_t d = 0; d <= depth; ++d) {
        if (total > kMax / per_stage)
            return kMax;
        total *= per_stage;
    }
    return total;
}

ExhaustiveResult exhaustive_policy_search(const MarkovModel& model, const RiskSpec& risk,
                                          std::size_t depth) {
    const auto& kernel = require_tabular(model);
    check_budget(model, depth);
    const auto rules = all_rules(model);
    const std::size_t ns = model.num_states();
    const std::size_t na = model.num_actions();
    const double beta = model.discount();

    // suffix[i] holds the nested values, per starting state, of the i-th
    // policy over stages k..depth; i encodes rules as digits base |rules|
    // with stage k least significant.
    std::vector<ValueFunction> suffix{ValueFunction(ns, 0.0)};
    bool terminal = true;
    for (std::size_t k = depth + 1; k-- > 0;) {
        std::vector<ValueFunction> next;
        next.reserve(suffix.size() * rules.size());
        std::vector<double> q(ns * na, 0.0);
        for (const auto& tail : suffix) {
            for (std::size_t s = 0; s < ns; ++s)
                for (std::size_t a : model.actions().admissible(s)) {
                    double v = model.cost_at(model.grid()[s], model.actions()[a]);
                    if (!terminal) {
                        std::vector<Atom> atoms;
                        const auto& row = kernel.rows[s][a];
                        for (std::size_t j = 0; j < ns; ++j)
                            if (row[j] > 0.0)
                                atoms.push_back({tail[j], row[j]});
                        v += beta * evaluate(risk, DiscreteDistribution(std::move(atoms)));
                    }
                    q[s * na + a] = v;
                }
            // digit order: index = tail_index * |rules| + rule, pushed in that order
            for (const auto& rule : rules) {
                ValueFunction w(ns);
                for (std::size_t s = 0; s < ns; ++s)
                    w[s] = q[s * na + rule[s]];
                next.push_back(std::move(w));
            }
        }
        suffix = std::move(next);
        terminal = false;
    }
    return reduce_min(suffix, rules, depth, ns);
}

ExhaustiveResult exhaustive_policy_search_by_tree(const MarkovModel& model, const RiskSpec& risk,
                                                  std::size_t depth) {
    require_tabular(model);
    check_budget(model, depth);
    const auto rules = all_rules(model);
    const std::size_t ns = model.num_states();
    const std::size_t total = policy_count(model, depth);
    std::vector<ValueFunction> values(total, ValueFunction(ns));
    for (std::size_t i = 0; i < total; ++i) {
        // same index encoding as exhaustive_policy_search: stage 0 least significant
        const Policy p = decode_policy(i, rules, depth);
        for (std::size_t s = 0; s < ns; ++s)
            values[i][s] = scenario_tree_value(model, risk, p, depth, s);
    }
    return reduce_min(values, rules, depth, ns);
}

double density_lp_oracle(double cap, const DiscreteDistribution& dist) {
    const auto& atoms = dist.atoms();
    const std::size_t n = atoms.size();
    if (n > kLpAtomBudget)
        throw ResourceError("vertex enumeration limited to " + std::to_string(kLpAtomBudget) +
                            " atoms, got " + std::to_string(n));
    if (!(cap >= 1.0))
        throw DomainError("density cap must be at least 1");
    constexpr double tol = 1e-12;
    double best = -std::numeric_limits<double>::infinity();
    // A vertex saturates a subset S at the cap and puts the leftover mass on
    // at most one further coordinate.
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double mass = 0.0;
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) {
                mass += cap * atoms[i].prob;
                obj += cap * atoms[i].prob * atoms[i].value;
            }
        if (mass > 1.0 + tol)
            continue;
        const double rest = 1.0 - mass;
        if (std::abs(rest) <= tol)
            best = std::max(best, obj);
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (std::size_t{1} << j))
                continue;
            if (rest / atoms[j].prob <= cap * (1.0 + tol))
                best = std::max(best, obj + rest * atoms[j].value);
        }
    }
    return best;
}

double avar_lp_oracle(double alpha, const DiscreteDistribution& dist) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw DomainError("AV@R level must lie in [0, 1)");
    return density_lp_oracle(1.0 / (1.0 - alpha), dist);
}

ValueFunction risk_neutral_dp(const MarkovModel& model, std::size_t N) {
    const std::size_t ns = model.num_states();
    const auto& xs = model.grid().points();
    const auto& as = model.actions().values();
    const double beta = model.discount();

    // linear scan for the bracketing segment; clamped outside the grid
    auto value_at = [&](const ValueFunction& v, double x) {
        if (x <= xs.front())
            return v.front();
        if (x >= xs.back())
            return v.back();
        std::size_t k = 0;
        while (xs[k + 1] < x)
            ++k;
        const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
        return (1.0 - t) * v[k] + t * v[k + 1];
    };

    ValueFunction v(ns, 0.0);
    for (std::size_t stage = 0; stage <= N; ++stage) {
        ValueFunction next(ns);
        for (std::size_t s = 0; s < ns; ++s) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a : model.actions().admissible(s)) {
                double expected = 0.0;
                if (const auto* kernel = std::get_if<TabularKernel>(&model.transition())) {
                    const auto& row = kernel->rows[s][a];
                    for (std::size_t j = 0; j < ns; ++j)
                        expected += row[j] * v[j];
                } else {
                    const auto& dyn = std::get<Dynamics>(model.transition());
                    for (const Atom& xi : dyn.noise.atoms())
                        expected += xi.prob * value_at(v, dyn.next_state(xs[s], as[a], xi.value));
                }
                best = std::min(best, model.cost_at(xs[s], as[a]) + beta * expected);
            }
            next[s] = best;
        }
        v = std::move(next);
    }
    return v;
}

} // namespace riskdp::oracle
