// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "riskdp/app.hpp"
#include "riskdp/fixtures.hpp"
#include "riskdp/risk_measures.hpp"
#include "riskdp/solver.hpp"
#include "riskdp/verification_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace riskdp;
namespace fx = riskdp::fixtures;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

std::vector<RiskSpec> axiom_specs() {
    std::vector<RiskSpec> out{RiskSpec::expectation()};
    for (int i = 0; i <= 9; ++i)
        out.push_back(RiskSpec::avar(0.1 * i));
    for (double k : {0.0, 0.25, 0.5})
        out.push_back(RiskSpec::mean_deviation(k));
    out.push_back(RiskSpec::kusuoka({{0.0, 0.5}, {0.5, 0.5}}));
    out.push_back(RiskSpec::kusuoka({{0.2, 0.3}, {0.8, 0.7}}));
    out.push_back(RiskSpec::kusuoka({{0.1, 0.25}, {0.5, 0.25}, {0.9, 0.5}}));
    return out;
}

std::vector<double> random_values(fx::Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

std::size_t random_size(fx::Rng& rng, std::size_t max_atoms) {
    return std::uniform_int_distribution<std::size_t>(1, max_atoms)(rng);
}

// E[Z] + kappa * E|Z - E[Z]| evaluated for any kappa, including outside the coherent range.
double mean_deviation_any(double kappa, std::span<const double> z, std::span<const double> p) {
    double m = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        m += p[i] * z[i];
    double dev = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        dev += p[i] * std::abs(z[i] - m);
    return m + kappa * dev;
}

LQParams lq_fixture() {
    LQParams p;
    p.sigma = 1.0;
    p.C = 2.0;
    p.state_min = -3.0;
    p.state_max = 3.0;
    p.grid_points = 41;
    p.action_count = 9;
    p.noise_atoms = 5;
    p.x0 = 1.0;
    return p;
}

app::RunConfig lq_run_config() {
    app::RunConfig cfg;
    cfg.model.kind = app::ModelKind::LQ;
    cfg.model.lq = lq_fixture();
    cfg.risk = RiskSpec::avar(0.5);
    cfg.discount = 0.5;
    cfg.epsilon = 0.1;
    cfg.tolerance = 1e-6;
    cfg.max_sweeps = 1000;
    return cfg;
}

// 1. Coherence axioms
Outcome criterion_axioms() {
    const auto t0 = Clock::now();
    fx::Rng rng(1001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto specs = axiom_specs();
    const double lambdas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    double worst = 0.0;
    std::size_t checks = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = random_size(rng, 16);
        const auto probs = fx::random_probabilities(rng, n);
        std::vector<Atom> atoms(n);
        const auto zv = random_values(rng, n);
        for (std::size_t i = 0; i < n; ++i)
            atoms[i] = {zv[i], probs[i]};
        const DiscreteDistribution Z(atoms);
        const auto wv = random_values(rng, n);
        const auto W = Z.with_values(wv);
        std::vector<double> up(n);
        for (std::size_t i = 0; i < n; ++i)
            up[i] = zv[i] + 5.0 * u(rng);
        const auto Zup = Z.with_values(up);
        const double c = 20.0 * u(rng) - 10.0;
        const double s = 5.0 * u(rng);
        std::vector<double> shifted(n), scaled(n);
        for (std::size_t i = 0; i < n; ++i) {
            shifted[i] = zv[i] + c;
            scaled[i] = s * zv[i];
        }
        const auto Zc = Z.with_values(shifted);
        const auto Zs = Z.with_values(scaled);

        for (const auto& spec : specs) {
            const double rz = evaluate(spec, Z);
            const double rw = evaluate(spec, W);
            for (double l : lambdas) {
                std::vector<double> mix(n);
                for (std::size_t i = 0; i < n; ++i)
                    mix[i] = l * zv[i] + (1.0 - l) * wv[i];
                const double lhs = evaluate(spec, Z.with_values(mix));
                worst = std::max(worst, lhs - (l * rz + (1.0 - l) * rw));
                ++checks;
            }
            worst = std::max(worst, rz - evaluate(spec, Zup));
            worst = std::max(worst, std::abs(evaluate(spec, Zc) - (rz + c)));
            worst = std::max(worst, std::abs(evaluate(spec, Zs) - s * rz));
            checks += 3;
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst <= 1e-9 && secs < 5.0;
    o.detail = fmt("%.0f checks, worst violation %.3g, %.2fs", static_cast<double>(checks), worst, secs);
    return o;
}

// 2. Primal / dual / LP agreement
Outcome criterion_primal_dual() {
    const auto t0 = Clock::now();
    fx::Rng rng(2002);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = random_size(rng, 10);
        const auto probs = fx::random_probabilities(rng, n);
        auto vals = random_values(rng, n);
        if (n > 2)
            vals[1] = vals[0]; // ties
        std::vector<Atom> atoms(n);
        for (std::size_t i = 0; i < n; ++i)
            atoms[i] = {vals[i], probs[i]};
        const DiscreteDistribution d(atoms);
        for (int i = 0; i <= 9; ++i) {
            const double a = 0.1 * i;
            const double p = avar_primal(a, d);
            worst = std::max(worst, std::abs(p - avar_dual(a, d).value));
            worst = std::max(worst, std::abs(p - oracle::avar_lp_oracle(a, d)));
        }
        for (double k : {0.0, 0.25, 0.5})
            worst = std::max(worst,
                             std::abs(mean_deviation_primal(k, d) - mean_deviation_dual(k, d).value));
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst <= 1e-9 && secs < 5.0;
    o.detail = fmt("max disagreement %.3g, %.2fs", worst, secs);
    return o;
}

// 3. Mean-deviation monotonicity holds for kappa <= 1/2 and fails at kappa = 1
Outcome criterion_md_monotonicity() {
    fx::Rng rng(3003);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t violations = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = random_size(rng, 8);
        const auto probs = fx::random_probabilities(rng, n);
        const auto z = random_values(rng, n);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = z[i] + (u(rng) < 0.5 ? 0.0 : 10.0 * u(rng));
        for (double k : {0.0, 0.1, 0.25, 0.4, 0.5}) {
            std::vector<Atom> az(n), aw(n);
            for (std::size_t i = 0; i < n; ++i) {
                az[i] = {z[i], probs[i]};
                aw[i] = {w[i], probs[i]};
            }
            if (mean_deviation_primal(k, DiscreteDistribution(az)) >
                mean_deviation_primal(k, DiscreteDistribution(aw)) + 1e-12)
                ++violations;
        }
    }

    std::size_t found_at = 0;
    for (std::size_t t = 1; t <= 100000 && !found_at; ++t) {
        const std::size_t n = 2 + random_size(rng, 3);
        const auto probs = fx::random_probabilities(rng, n);
        const auto z = random_values(rng, n);
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = z[i] + (u(rng) < 0.5 ? 0.0 : 10.0 * u(rng));
        if (mean_deviation_any(1.0, z, probs) > mean_deviation_any(1.0, w, probs) + 1e-9)
            found_at = t;
    }
    Outcome o;
    o.pass = violations == 0 && found_at > 0;
    o.detail = fmt("%.0f violations for kappa <= 0.5; kappa = 1 counterexample at trial %.0f",
                   static_cast<double>(violations), static_cast<double>(found_at));
    return o;
}

// 4. Backward induction equals exhaustive policy search
Outcome criterion_exhaustive() {
    const auto t0 = Clock::now();
    fx::Rng rng(4004);
    const RiskSpec risks[] = {RiskSpec::expectation(), RiskSpec::avar(0.3),
                              RiskSpec::mean_deviation(0.4)};
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto m = fx::random_tabular_model(rng, 4, 2, 0.9);
        for (const auto& risk : risks) {
            const auto bi = backward_induct(m, risk, 3);
            const auto ex = oracle::exhaustive_policy_search(m, risk, 3);
            worst = std::max(worst, max_abs_diff(bi.stage_values[0], ex.best_value));
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = worst <= 1e-9 && secs < 30.0;
    o.detail = fmt("max |J_0 - exhaustive| %.3g over 150 cases, %.2fs", worst, secs);
    return o;
}

// 5. Nested evaluation equals the explicit scenario tree
Outcome criterion_scenario_tree() {
    fx::Rng rng(5005);
    const RiskSpec risks[] = {RiskSpec::expectation(), RiskSpec::avar(0.3),
                              RiskSpec::mean_deviation(0.4),
                              RiskSpec::kusuoka({{0.1, 0.5}, {0.7, 0.5}})};
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto m = fx::random_tabular_model(rng, 4, 2, 0.8);
        const std::size_t depth = static_cast<std::size_t>(t % 6);
        const auto pol = fx::random_policy(rng, m, depth);
        const auto& risk = risks[t % 4];
        const auto W = evaluate_policy(m, risk, pol, depth);
        for (std::size_t s = 0; s < m.num_states(); ++s)
            worst = std::max(worst, std::abs(W[s] - oracle::scenario_tree_value(m, risk, pol, depth, s)));
    }
    Outcome o;
    o.pass = worst <= 1e-9;
    o.detail = fmt("max disagreement %.3g over 50 pairs", worst);
    return o;
}

// 6. Monotone backward induction and fast value-iteration convergence
Outcome criterion_monotone_vi() {
    const auto t0 = Clock::now();
    const auto m = build_lq(lq_fixture(), 0.5);
    const auto risk = RiskSpec::avar(0.5);
    const auto bi = backward_induct(m, risk, 60);
    // V_{0,N} equals J_{60-N} of the 60-horizon run: stage n has 60 - n stages left.
    double worst = 0.0;
    for (std::size_t N = 1; N <= 60; ++N) {
        const auto& shorter = bi.stage_values[61 - N];
        const auto& longer = bi.stage_values[60 - N];
        for (std::size_t s = 0; s < m.num_states(); ++s)
            worst = std::max(worst, shorter[s] - longer[s]);
    }
    const auto rep = value_iterate(m, risk, 1e-6, 1000);
    const double secs = seconds_since(t0);
    const double bound = rep.last_residual() * 0.5 / (1.0 - 0.5);
    Outcome o;
    o.pass = worst <= 1e-12 && rep.status == SolveStatus::Converged && bound < 1e-6 &&
             rep.sweeps < 100 && secs < 5.0;
    o.detail = fmt("max decrease %.3g; %.0f sweeps; %.2fs", worst, static_cast<double>(rep.sweeps), secs) +
               fmt(", residual bound %.3g", bound);
    return o;
}

// 7. The assembled policy is epsilon-optimal
Outcome criterion_epsilon_policy() {
    auto cfg = lq_run_config();
    cfg.tolerance = 1e-9;
    const auto model = app::build_model(cfg);
    const auto out = app::run_solve(cfg);
    Outcome o;
    if (out.report.status != SolveStatus::Converged) {
        o.pass = false;
        o.detail = "value iteration did not converge";
        return o;
    }
    const std::size_t N0 = out.report.horizon;
    const auto W = evaluate_policy(model, cfg.risk, out.report.policy, N0 + 40);
    double worst = 0.0;
    for (std::size_t s = 0; s < W.size(); ++s)
        worst = std::max(worst, std::abs(W[s] - out.report.converged_value[s]));
    o.pass = worst <= cfg.epsilon;
    o.detail = fmt("N0 = %.0f, c_bar = %.3g, max |W - V*| = %.3g", static_cast<double>(N0),
                   app::tail_bound_per_stage(cfg, model), worst);
    return o;
}

// 8. Investment model, zero position: x0 / (1 - beta)
Outcome criterion_investment_anchor() {
    InvestmentParams p;
    p.r = 0.0;
    p.wealth_min = 0.0;
    p.wealth_max = 2.0;
    p.grid_points = 21;
    p.action_count = 5;
    p.x0 = 1.0;
    const auto m = build_investment(p, 0.9);
    const StagePolicy zero(m.num_states(), nearest_action(m, 0.0));
    const auto W = evaluate_policy(m, RiskSpec::avar(0.5), Policy::stationary(zero), 200);
    const double v = W[m.grid().nearest(1.0)];
    Outcome o;
    o.pass = m.grid()[m.grid().nearest(1.0)] == 1.0 && m.actions()[zero[0]] == 0.0 &&
             std::abs(v - 10.0) <= 1e-6;
    o.detail = fmt("W(x0) = %.12g, |W - 10| = %.3g", v, std::abs(v - 10.0));
    return o;
}

// 9. LQ zero policy stays under 2 x0^2 + 2 sigma^2 cap / (1 - beta)
Outcome criterion_lq_bound() {
    LQParams p = lq_fixture();
    p.state_min = -8.0;
    p.state_max = 8.0;
    p.grid_points = 161;
    const auto m = build_lq(p, 0.5);
    const auto risk = RiskSpec::avar(0.5);
    const StagePolicy zero(m.num_states(), nearest_action(m, 0.0));
    const auto W = evaluate_policy(m, risk, Policy::stationary(zero), 60);
    const std::size_t i0 = m.grid().nearest(1.0);
    const double bound = 2.0 * 1.0 + 2.0 * 1.0 * risk.density_cap() / (1.0 - 0.5);
    Outcome o;
    o.pass = m.grid()[i0] == 1.0 && W[i0] <= bound;
    o.detail = fmt("W(x0) = %.6g <= %.6g", W[i0], bound);
    return o;
}

// 10. Risk-neutral degeneracy
Outcome criterion_risk_neutral() {
    std::vector<MarkovModel> models;
    models.push_back(build_lq(lq_fixture(), 0.5));
    {
        LQParams wide = lq_fixture();
        wide.state_min = -8.0;
        wide.state_max = 8.0;
        wide.grid_points = 161;
        models.push_back(build_lq(wide, 0.5));
    }
    {
        InvestmentParams p;
        models.push_back(build_investment(p, 0.9));
    }
    fx::Rng rng(4004);
    for (int t = 0; t < 50; ++t)
        models.push_back(fx::random_tabular_model(rng, 4, 2, 0.9));

    double worst_dp = 0.0;
    double worst_avar0 = 0.0;
    bool policies_equal = true;
    for (const auto& m : models) {
        for (std::size_t N : {0u, 1u, 5u, 20u}) {
            const auto bi = backward_induct(m, RiskSpec::expectation(), N);
            worst_dp = std::max(worst_dp, max_abs_diff(bi.stage_values[0], oracle::risk_neutral_dp(m, N)));
        }
        const auto e = value_iterate(m, RiskSpec::expectation(), 1e-9, 2000);
        const auto a = value_iterate(m, RiskSpec::avar(0.0), 1e-9, 2000);
        worst_avar0 = std::max(worst_avar0, max_abs_diff(e.converged_value, a.converged_value));
        policies_equal = policies_equal && e.sweeps == a.sweeps && e.policy.stages == a.policy.stages;
    }
    Outcome o;
    o.pass = worst_dp <= 1e-9 && worst_avar0 <= 1e-9 && policies_equal;
    o.detail = fmt("dp vs oracle %.3g; AV@R_0 vs expectation %.3g; ", worst_dp, worst_avar0) +
               (policies_equal ? "same policies" : "policies differ");
    return o;
}

// 11. V*(x0) nondecreasing in the AV@R level
Outcome criterion_sweep() {
    const auto cfg = lq_run_config();
    std::vector<double> alphas;
    for (int i = 0; i <= 9; ++i)
        alphas.push_back(0.1 * i);
    const auto sweep = app::run_sweep(cfg, "alpha", alphas);
    bool ok = sweep.all_converged && sweep.rows.size() == 10;
    double worst = 0.0;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i)
        worst = std::max(worst, sweep.rows[i - 1].value_at_x0 - sweep.rows[i].value_at_x0);
    ok = ok && worst <= 1e-12;
    Outcome o;
    o.pass = ok;
    o.detail = fmt("V*(x0) from %.6g to %.6g, max decrease %.3g", sweep.rows.front().value_at_x0,
                   sweep.rows.back().value_at_x0, worst);
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"risk axioms", criterion_axioms},
        {"primal/dual/lp agreement", criterion_primal_dual},
        {"mean-deviation monotonicity boundary", criterion_md_monotonicity},
        {"dp vs exhaustive search", criterion_exhaustive},
        {"nested evaluation vs scenario tree", criterion_scenario_tree},
        {"monotone value iteration", criterion_monotone_vi},
        {"epsilon-optimal assembly", criterion_epsilon_policy},
        {"investment zero-policy anchor", criterion_investment_anchor},
        {"lq zero-policy bound", criterion_lq_bound},
        {"risk-neutral degeneracy", criterion_risk_neutral},
        {"risk-aversion monotonicity", criterion_sweep},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    std::fflush(stdout);
    return failures == 0 ? 0 : 1;
}
