#include "riskdp/solver.hpp"

#include "riskdp/errors.hpp"
#include "numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskdp {

namespace {

constexpr double kMonotoneSlack = 1e-12;

void check_values(const MarkovModel& model, std::span<const double> v) {
    if (v.size() != model.num_states())
        throw DomainError("value function has " + std::to_string(v.size()) +
                          " entries, model has " + std::to_string(model.num_states()) + " states");
}

void check_rule(const MarkovModel& model, const StagePolicy& rule, std::size_t stage) {
    if (rule.size() != model.num_states())
        throw DomainError("decision rule at stage " + std::to_string(stage) + " covers " +
                          std::to_string(rule.size()) + " states, model has " +
                          std::to_string(model.num_states()));
    for (std::size_t s = 0; s < rule.size(); ++s)
        if (!model.actions().is_admissible(s, rule[s]))
            throw DomainError("decision rule at stage " + std::to_string(stage) +
                              " picks inadmissible action " + std::to_string(rule[s]) +
                              " at state " + std::to_string(s));
}

double q_value(const MarkovModel& model, const RiskSpec& risk, std::span<const double> v_next,
               std::size_t s, std::size_t a) {
    return model.cost(s, a) +
           model.discount() * evaluate(risk, successor_distribution(model, s, a, v_next));
}

} // namespace

const StagePolicy& Policy::at(std::size_t stage) const {
    if (stage < stages.size())
        return stages[stage];
    if (repeat_last && !stages.empty())
        return stages.back();
    throw DomainError("policy has no decision rule for stage " + std::to_string(stage));
}

BellmanResult bellman_update(const MarkovModel& model, const RiskSpec& risk,
                             std::span<const double> v_next) {
    check_values(model, v_next);
    const std::size_t ns = model.num_states();
    BellmanResult out;
    out.values.resize(ns);
    out.policy.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0;
        // admissible lists are ascending for every constructor in this library,
        // but the tie rule is stated on indices, so compare explicitly
        for (std::size_t a : model.actions().admissible(s)) {
            const double q = q_value(model, risk, v_next, s, a);
            if (q < best || (q == best && a < best_a)) {
                best = q;
                best_a = a;
            }
        }
        out.values[s] = best;
        out.policy[s] = best_a;
    }
    return out;
}

BackwardInduction backward_induct(const MarkovModel& model, const RiskSpec& risk, std::size_t N) {
    BackwardInduction out;
    out.stage_values.resize(N + 1);
    out.stage_policies.resize(N + 1);
    ValueFunction next(model.num_states(), 0.0);
    for (std::size_t k = N + 1; k-- > 0;) {
        auto step = bellman_update(model, risk, next);
        out.stage_values[k] = step.values;
        out.stage_policies[k] = std::move(step.policy);
        next = std::move(step.values);
    }
    return out;
}

SolveReport value_iterate(const MarkovModel& model, const RiskSpec& risk, double tol,
                          std::size_t max_sweeps) {
    if (!(tol > 0.0))
        throw DomainError("tolerance must be positive");
    const double beta = model.discount();
    const double envelope = beta / (1.0 - beta);

    SolveReport rep;
    ValueFunction v(model.num_states(), 0.0);
    rep.values_per_iteration.push_back(v);
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        auto step = bellman_update(model, risk, v);
        double up = 0.0;
        double down = 0.0;
        for (std::size_t s = 0; s < v.size(); ++s) {
            const double d = step.values[s] - v[s];
            up = std::max(up, d);
            down = std::min(down, d / std::max(1.0, std::abs(v[s])));
        }
        if (down < -kMonotoneSlack)
            throw std::logic_error("value iteration lost monotonicity at sweep " +
                                   std::to_string(sweep) + " (decrease " +
                                   detail::format_double(down) + ")");
        v = std::move(step.values);
        rep.values_per_iteration.push_back(v);
        rep.residuals.push_back(up);
        rep.sweeps = sweep;
        if (up * envelope < tol) {
            rep.status = SolveStatus::Converged;
            break;
        }
    }
    rep.converged_value = v;
    rep.policy = Policy::stationary(bellman_update(model, risk, v).policy);
    return rep;
}

EpsilonHorizon epsilon_horizon(double c_bar, double discount, double epsilon) {
    if (!(epsilon > 0.0))
        throw DomainError("epsilon must be positive");
    if (!(c_bar >= 0.0) || !std::isfinite(c_bar))
        throw DomainError("tail bound per stage must be finite and nonnegative");
    if (!(discount > 0.0 && discount < 1.0))
        throw DomainError("discount must lie in (0, 1)");
    EpsilonHorizon out;
    for (;; ++out.n0) {
        out.tail = c_bar * std::pow(discount, static_cast<double>(out.n0 + 1)) / (1.0 - discount);
        if (out.tail < epsilon)
            return out;
    }
}

Policy assemble_epsilon_policy(std::span<const StagePolicy> dp_policies, std::size_t n0,
                               const StagePolicy& base) {
    if (dp_policies.size() < n0 + 1)
        throw DomainError("missing decision rule for stage " + std::to_string(dp_policies.size()) +
                          " (need stages 0.." + std::to_string(n0) + ")");
    if (base.empty())
        throw DomainError("base policy is empty");
    Policy out;
    out.repeat_last = true;
    out.stages.assign(dp_policies.begin(), dp_policies.begin() + static_cast<std::ptrdiff_t>(n0 + 1));
    out.stages.push_back(base);
    return out;
}

ValueFunction evaluate_policy(const MarkovModel& model, const RiskSpec& risk, const Policy& policy,
                              std::size_t N) {
    ValueFunction w(model.num_states(), 0.0);
    for (std::size_t k = N + 1; k-- > 0;) {
        const StagePolicy& rule = policy.at(k);
        check_rule(model, rule, k);
        ValueFunction next(model.num_states());
        for (std::size_t s = 0; s < next.size(); ++s)
            next[s] = q_value(model, risk, w, s, rule[s]);
        w = std::move(next);
    }
    return w;
}

bool supersolution_check(std::span<const double> v, const MarkovModel& model,
                         const RiskSpec& risk) {
    const auto tv = bellman_update(model, risk, v);
    for (std::size_t s = 0; s < v.size(); ++s)
        if (v[s] < tv.values[s] - 1e-12)
            return false;
    return true;
}

SolveReport solve_epsilon_optimal(const MarkovModel& model, const RiskSpec& risk,
                                  const std::optional<StagePolicy>& base,
                                  const EpsilonSolveOptions& options) {
    if (base)
        check_rule(model, *base, 0);
    SolveReport rep = value_iterate(model, risk, options.tolerance, options.max_sweeps);
    rep.epsilon = options.epsilon;
    const auto eh = epsilon_horizon(options.c_bar, model.discount(), options.epsilon);
    rep.horizon = eh.n0;
    rep.tail_bound = eh.tail;
    if (rep.status != SolveStatus::Converged)
        return rep;
    const auto bi = backward_induct(model, risk, eh.n0);
    const StagePolicy tail = base ? *base : rep.policy.stages.front();
    rep.policy = assemble_epsilon_policy(bi.stage_policies, eh.n0, tail);
    return rep;
}

} // namespace riskdp
