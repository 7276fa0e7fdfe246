#include "riskdp/app.hpp"

#include "riskdp/errors.hpp"
#include "riskdp/fixtures.hpp"
#include "riskdp/verification_oracle.hpp"
#include "numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace riskdp::app {

using nlohmann::json;
using detail::format_double;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw ConfigError("config field '" + field + "': " + message);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            field_error(where.empty() ? key : where + "." + key, "unknown key");
}

double number_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number())
        field_error(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        field_error(path, "must be finite");
    return x;
}

std::size_t count_field(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned())
        field_error(path, "must be a nonnegative integer");
    return v.get<std::size_t>();
}

template <typename T>
void maybe_number(const json& obj, const std::string& key, const std::string& prefix, T& out) {
    if (!obj.contains(key))
        return;
    if constexpr (std::is_same_v<T, std::size_t>)
        out = count_field(obj, key, prefix + "." + key);
    else
        out = number_field(obj, key, prefix + "." + key);
}

InvestmentParams parse_investment(const json& obj) {
    if (!obj.is_object())
        field_error("model.investment", "must be an object");
    reject_unknown(obj,
                   {"mu", "r", "sigma", "C", "wealth_min", "wealth_max", "grid_points",
                    "action_count", "noise_atoms", "x0"},
                   "model.investment");
    InvestmentParams p;
    const std::string pre = "model.investment";
    maybe_number(obj, "mu", pre, p.mu);
    maybe_number(obj, "r", pre, p.r);
    maybe_number(obj, "sigma", pre, p.sigma);
    maybe_number(obj, "C", pre, p.C);
    maybe_number(obj, "wealth_min", pre, p.wealth_min);
    maybe_number(obj, "wealth_max", pre, p.wealth_max);
    maybe_number(obj, "grid_points", pre, p.grid_points);
    maybe_number(obj, "action_count", pre, p.action_count);
    maybe_number(obj, "noise_atoms", pre, p.noise_atoms);
    maybe_number(obj, "x0", pre, p.x0);
    return p;
}

LQParams parse_lq(const json& obj) {
    if (!obj.is_object())
        field_error("model.lq", "must be an object");
    reject_unknown(obj,
                   {"sigma", "C", "state_min", "state_max", "grid_points", "action_count",
                    "noise_atoms", "x0"},
                   "model.lq");
    LQParams p;
    const std::string pre = "model.lq";
    maybe_number(obj, "sigma", pre, p.sigma);
    maybe_number(obj, "C", pre, p.C);
    maybe_number(obj, "state_min", pre, p.state_min);
    maybe_number(obj, "state_max", pre, p.state_max);
    maybe_number(obj, "grid_points", pre, p.grid_points);
    maybe_number(obj, "action_count", pre, p.action_count);
    maybe_number(obj, "noise_atoms", pre, p.noise_atoms);
    maybe_number(obj, "x0", pre, p.x0);
    return p;
}

RiskSpec parse_risk(const json& v) {
    try {
        if (v.is_string())
            return parse_risk_literal(v.get<std::string>());
        if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string())
            field_error("risk", "must be a literal string or an object with a 'kind'");
        const auto kind = v.at("kind").get<std::string>();
        if (kind == "expectation") {
            reject_unknown(v, {"kind"}, "risk");
            return RiskSpec::expectation();
        }
        if (kind == "avar") {
            reject_unknown(v, {"kind", "alpha"}, "risk");
            return RiskSpec::avar(number_field(v, "alpha", "risk.alpha"));
        }
        if (kind == "mean_deviation") {
            reject_unknown(v, {"kind", "kappa"}, "risk");
            return RiskSpec::mean_deviation(number_field(v, "kappa", "risk.kappa"));
        }
        if (kind == "kusuoka") {
            reject_unknown(v, {"kind", "components"}, "risk");
            std::vector<KusuokaComponent> comps;
            for (const auto& c : v.at("components"))
                comps.push_back({number_field(c, "alpha", "risk.components.alpha"),
                                 number_field(c, "weight", "risk.components.weight")});
            return RiskSpec::kusuoka(std::move(comps));
        }
        field_error("risk.kind", "unknown kind '" + kind + "'");
    } catch (const DomainError& e) {
        field_error("risk", e.what());
    } catch (const json::exception& e) {
        field_error("risk", e.what());
    }
}

std::string model_name(ModelKind k) {
    switch (k) {
    case ModelKind::Investment:
        return "investment";
    case ModelKind::LQ:
        return "lq";
    case ModelKind::Tabular:
        return "tabular";
    }
    return "unknown";
}

json atoms_json(const DiscreteDistribution& d) {
    json out = json::array();
    for (const Atom& a : d.atoms())
        out.push_back({a.value, a.prob});
    return out;
}

json model_json(const MarkovModel& model) {
    json out;
    if (const auto* k = std::get_if<TabularKernel>(&model.transition()))
        out["kernel"] = k->rows;
    json costs = json::array();
    for (std::size_t s = 0; s < model.num_states(); ++s) {
        json row = json::array();
        for (std::size_t a = 0; a < model.num_actions(); ++a)
            row.push_back(model.cost(s, a));
        costs.push_back(row);
    }
    out["costs"] = costs;
    out["states"] = model.num_states();
    out["actions"] = model.num_actions();
    out["discount"] = model.discount();
    return out;
}

json policy_json(const Policy& p) {
    return json{{"stages", p.stages}, {"repeat_last", p.repeat_last}};
}

double max_abs_diff(const ValueFunction& a, const ValueFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

// Configuration ------------------------------------------------------------

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    reject_unknown(doc,
                   {"model", "risk", "discount", "epsilon", "tolerance", "max_sweeps", "horizon",
                    "seed", "output_dir"},
                   "");
    for (const char* key : {"model", "risk", "discount"})
        if (!doc.contains(key))
            field_error(key, "missing");

    RunConfig cfg;
    cfg.source = doc;

    const auto& m = doc.at("model");
    if (!m.is_object() || m.size() != 1)
        field_error("model", "must be an object with exactly one of investment, lq, tabular");
    const auto& [kind, params] = *m.items().begin();
    if (kind == "investment") {
        cfg.model.kind = ModelKind::Investment;
        cfg.model.investment = parse_investment(params);
    } else if (kind == "lq") {
        cfg.model.kind = ModelKind::LQ;
        cfg.model.lq = parse_lq(params);
    } else if (kind == "tabular") {
        cfg.model.kind = ModelKind::Tabular;
        std::string path;
        if (params.is_string()) {
            path = params.get<std::string>();
        } else if (params.is_object() && params.contains("path") && params.at("path").is_string()) {
            reject_unknown(params, {"path", "x0"}, "model.tabular");
            path = params.at("path").get<std::string>();
            if (params.contains("x0"))
                cfg.model.tabular_x0 = count_field(params, "x0", "model.tabular.x0");
        } else {
            field_error("model.tabular", "must be a path string or {\"path\": ..., \"x0\": ...}");
        }
        std::filesystem::path p(path);
        if (p.is_relative())
            p = std::filesystem::path(base_dir) / p;
        cfg.model.tabular_path = p.string();
    } else {
        field_error("model", "unknown model kind '" + kind + "'");
    }

    cfg.risk = parse_risk(doc.at("risk"));

    cfg.discount = number_field(doc, "discount", "discount");
    if (!(cfg.discount > 0.0 && cfg.discount < 1.0))
        field_error("discount", "discount must lie in (0, 1)");
    if (doc.contains("epsilon")) {
        cfg.epsilon = number_field(doc, "epsilon", "epsilon");
        if (!(cfg.epsilon > 0.0))
            field_error("epsilon", "epsilon must be positive");
    }
    if (doc.contains("tolerance")) {
        cfg.tolerance = number_field(doc, "tolerance", "tolerance");
        if (!(cfg.tolerance > 0.0))
            field_error("tolerance", "tolerance must be positive");
    }
    if (doc.contains("max_sweeps")) {
        cfg.max_sweeps = count_field(doc, "max_sweeps", "max_sweeps");
        if (cfg.max_sweeps == 0)
            field_error("max_sweeps", "max_sweeps must be at least 1");
    }
    if (doc.contains("horizon"))
        cfg.horizon = count_field(doc, "horizon", "horizon");
    if (doc.contains("seed"))
        cfg.seed = count_field(doc, "seed", "seed");
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string())
            field_error("output_dir", "must be a string");
        cfg.output_dir = doc.at("output_dir").get<std::string>();
    }

    // Building the model validates every model-level invariant.
    const MarkovModel model = build_model(cfg);
    const double x0 = initial_coordinate(cfg);
    if (cfg.model.kind == ModelKind::Tabular) {
        if (cfg.model.tabular_x0 >= model.num_states())
            field_error("model.tabular.x0", "initial state out of range");
    } else if (x0 < model.grid().front() || x0 > model.grid().back()) {
        field_error("model." + model_name(cfg.model.kind) + ".x0", "x0 lies outside the grid");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

MarkovModel build_model(const RunConfig& config) {
    try {
        switch (config.model.kind) {
        case ModelKind::Investment:
            return build_investment(config.model.investment, config.discount);
        case ModelKind::LQ:
            return build_lq(config.model.lq, config.discount);
        case ModelKind::Tabular:
            return load_tabular_json(config.model.tabular_path, config.discount);
        }
    } catch (const DomainError& e) {
        field_error("model", e.what());
    }
    throw ConfigError("unknown model kind");
}

double initial_coordinate(const RunConfig& config) {
    switch (config.model.kind) {
    case ModelKind::Investment:
        return config.model.investment.x0;
    case ModelKind::LQ:
        return config.model.lq.x0;
    case ModelKind::Tabular:
        return static_cast<double>(config.model.tabular_x0);
    }
    return 0.0;
}

std::optional<StagePolicy> base_policy(const RunConfig& config, const MarkovModel& model) {
    if (config.model.kind == ModelKind::Tabular)
        return std::nullopt;
    return StagePolicy(model.num_states(), nearest_action(model, 0.0));
}

double tail_bound_per_stage(const RunConfig& config, const MarkovModel& model) {
    switch (config.model.kind) {
    case ModelKind::Investment:
        return model.grid().back();
    case ModelKind::LQ: {
        const double xmax = std::max(std::abs(model.grid().front()), std::abs(model.grid().back()));
        const double sigma = config.model.lq.sigma;
        return 2.0 * xmax * xmax + 2.0 * sigma * sigma * config.risk.density_cap();
    }
    case ModelKind::Tabular:
        return model.max_cost();
    }
    return model.max_cost();
}

// Solve --------------------------------------------------------------------

json report_to_json(const SolveReport& report, const RunConfig& config, const MarkovModel& model,
                    double value_at_x0) {
    json out;
    out["status"] = report.status == SolveStatus::Converged ? "converged" : "not_converged";
    out["sweeps"] = report.sweeps;
    out["residuals"] = report.residuals;
    out["last_residual"] = report.last_residual();
    out["values_per_iteration"] = report.values_per_iteration;
    out["converged_value"] = report.converged_value;
    out["horizon"] = report.horizon;
    out["epsilon"] = report.epsilon;
    out["tail_bound"] = report.tail_bound;
    out["policy"] = policy_json(report.policy);
    out["grid"] = model.grid().points();
    out["actions"] = model.actions().values();
    out["model"] = model_name(config.model.kind);
    out["risk"] = config.risk.to_string();
    out["discount"] = model.discount();
    out["x0"] = initial_coordinate(config);
    out["value_at_x0"] = value_at_x0;
    out["config"] = config.source;
    return out;
}

std::string values_to_csv(const MarkovModel& model, const ValueFunction& values) {
    std::string out = "state,value\n";
    for (std::size_t s = 0; s < values.size(); ++s)
        out += format_double(model.grid()[s]) + "," + format_double(values[s]) + "\n";
    return out;
}

std::string policy_to_csv(const Policy& policy, std::size_t num_states) {
    std::string out = "stage,state,action\n";
    for (std::size_t k = 0; k < policy.stages.size(); ++k)
        for (std::size_t s = 0; s < num_states; ++s)
            out += std::to_string(k) + "," + std::to_string(s) + "," +
                   std::to_string(policy.stages[k].at(s)) + "\n";
    return out;
}

SolveOutput run_solve(const RunConfig& config) {
    const MarkovModel model = build_model(config);
    EpsilonSolveOptions opts;
    opts.tolerance = config.tolerance;
    opts.max_sweeps = config.max_sweeps;
    opts.epsilon = config.epsilon;
    opts.c_bar = tail_bound_per_stage(config, model);

    SolveOutput out;
    out.report = solve_epsilon_optimal(model, config.risk, base_policy(config, model), opts);
    out.value_at_x0 =
        interpolate(model.grid(), out.report.converged_value, initial_coordinate(config));
    out.report_json = report_to_json(out.report, config, model, out.value_at_x0).dump(2) + "\n";
    out.values_csv = values_to_csv(model, out.report.converged_value);
    out.policy_csv = policy_to_csv(out.report.policy, model.num_states());
    return out;
}

// Evaluate -----------------------------------------------------------------

Policy parse_policy_csv(const std::string& text, const MarkovModel& model) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::map<std::size_t, std::vector<long long>> rows;
    const std::size_t ns = model.num_states();
    auto fail = [&](const std::string& msg) -> void {
        throw ConfigError("policy line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line.erase(std::remove_if(line.begin(), line.end(),
                                  [](unsigned char c) { return std::isspace(c); }),
                   line.end());
        if (line.empty())
            continue;
        if (!header) {
            if (line != "stage,state,action")
                fail("expected header 'stage,state,action'");
            header = true;
            continue;
        }
        std::size_t fields[3];
        std::istringstream ls(line);
        std::string tok;
        int n = 0;
        while (std::getline(ls, tok, ',')) {
            if (n >= 3)
                fail("too many fields");
            if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
                fail("'" + tok + "' is not a nonnegative integer");
            fields[n++] = std::stoull(tok);
        }
        if (n != 3)
            fail("expected 3 fields");
        const auto [stage, state, action] = std::tuple(fields[0], fields[1], fields[2]);
        if (state >= ns)
            fail("state " + std::to_string(state) + " out of range (model has " +
                 std::to_string(ns) + " states)");
        if (!model.actions().is_admissible(state, action))
            fail("action " + std::to_string(action) + " is not admissible at state " +
                 std::to_string(state));
        auto& rule = rows[stage];
        if (rule.empty())
            rule.assign(ns, -1);
        if (rule[state] >= 0)
            fail("duplicate row for stage " + std::to_string(stage) + ", state " +
                 std::to_string(state));
        rule[state] = static_cast<long long>(action);
    }
    if (!header)
        throw ConfigError("policy file is empty");
    if (rows.empty())
        throw ConfigError("policy file has no decision rules");
    Policy p;
    p.repeat_last = true;
    std::size_t expected = 0;
    for (const auto& [stage, rule] : rows) {
        if (stage != expected)
            throw ConfigError("policy stages must be contiguous from 0; missing stage " +
                              std::to_string(expected));
        StagePolicy r(ns);
        for (std::size_t s = 0; s < ns; ++s) {
            if (rule[s] < 0)
                throw ConfigError("policy stage " + std::to_string(stage) +
                                  " has no action for state " + std::to_string(s));
            r[s] = static_cast<std::size_t>(rule[s]);
        }
        p.stages.push_back(std::move(r));
        ++expected;
    }
    return p;
}

std::string run_evaluate(const RunConfig& config, const std::string& policy_csv) {
    const MarkovModel model = build_model(config);
    const Policy policy = parse_policy_csv(policy_csv, model);
    return values_to_csv(model, evaluate_policy(model, config.risk, policy, config.horizon));
}

// Verify -------------------------------------------------------------------

VerifyOutcome run_verify(const RunConfig& config, const VerifyOptions& options) {
    constexpr double tol = 1e-9;
    VerifyOutcome out;
    fixtures::Rng rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto record = [&](VerifySuiteResult& suite, double err, const std::function<json()>& dump) {
        ++suite.cases;
        suite.max_error = std::max(suite.max_error, err);
        if (!(err <= tol)) {
            suite.passed = false;
            if (out.counterexample_json.empty()) {
                json j = dump();
                j["suite"] = suite.name;
                j["error"] = err;
                j["tolerance"] = tol;
                out.counterexample_json = j.dump(2) + "\n";
            }
        }
    };

    {
        VerifySuiteResult suite{"avar primal/dual/lp"};
        for (int i = 0; i < 200; ++i) {
            const auto dist = fixtures::random_distribution(rng, 10);
            const double alpha = i % 2 ? std::floor(unit(rng) * 10.0) / 10.0 : unit(rng) * 0.99;
            const double cap = 1.0 / (1.0 - alpha) * (options.corrupt_cap ? 1.5 : 1.0);
            const double primal = avar_primal(alpha, dist);
            const double dual = avar_dual(alpha, dist).value;
            const double lp = oracle::density_lp_oracle(cap, dist);
            const double err = std::max(std::abs(primal - dual), std::abs(primal - lp));
            record(suite, err, [&] {
                return json{{"alpha", alpha}, {"cap", cap}, {"atoms", atoms_json(dist)},
                            {"primal", primal}, {"dual", dual}, {"lp", lp}};
            });
        }
        out.suites.push_back(suite);
    }
    {
        VerifySuiteResult suite{"mean-deviation primal/dual"};
        for (int i = 0; i < 200; ++i) {
            const auto dist = fixtures::random_distribution(rng, 10);
            const double kappa = 0.5 * unit(rng);
            const double primal = mean_deviation_primal(kappa, dist);
            const double dual = mean_deviation_dual(kappa, dist).value;
            record(suite, std::abs(primal - dual), [&] {
                return json{{"kappa", kappa}, {"atoms", atoms_json(dist)}, {"primal", primal},
                            {"dual", dual}};
            });
        }
        out.suites.push_back(suite);
    }

    const std::vector<RiskSpec> risks{RiskSpec::expectation(), config.risk};
    {
        VerifySuiteResult suite{"dp vs exhaustive search"};
        for (int i = 0; i < 10; ++i) {
            const auto model = fixtures::random_tabular_model(rng, 4, 2, config.discount);
            for (const auto& risk : risks) {
                const auto dp = backward_induct(model, risk, 3).stage_values.front();
                const auto ex = oracle::exhaustive_policy_search(model, risk, 3);
                record(suite, max_abs_diff(dp, ex.best_value), [&] {
                    return json{{"model", model_json(model)}, {"risk", risk.to_string()},
                                {"depth", 3}, {"backward_induct", dp},
                                {"exhaustive", ex.best_value}};
                });
            }
        }
        out.suites.push_back(suite);
    }
    {
        VerifySuiteResult suite{"scenario tree vs evaluate"};
        for (int i = 0; i < 10; ++i) {
            const auto model = fixtures::random_tabular_model(rng, 4, 2, config.discount);
            const std::size_t depth = 1 + static_cast<std::size_t>(i % 4);
            const auto policy = fixtures::random_policy(rng, model, depth);
            const auto w = evaluate_policy(model, config.risk, policy, depth);
            ValueFunction tree(model.num_states());
            for (std::size_t s = 0; s < tree.size(); ++s)
                tree[s] = oracle::scenario_tree_value(model, config.risk, policy, depth, s);
            record(suite, max_abs_diff(w, tree), [&] {
                return json{{"model", model_json(model)}, {"risk", config.risk.to_string()},
                            {"depth", depth}, {"policy", policy_json(policy)},
                            {"evaluate_policy", w}, {"scenario_tree", tree}};
            });
        }
        out.suites.push_back(suite);
    }
    {
        VerifySuiteResult suite{"risk-neutral dp"};
        const MarkovModel model = build_model(config);
        const std::size_t n = std::min<std::size_t>(config.horizon, 20);
        const auto dp = backward_induct(model, RiskSpec::expectation(), n).stage_values.front();
        const auto rn = oracle::risk_neutral_dp(model, n);
        record(suite, max_abs_diff(dp, rn), [&] {
            return json{{"model", model_name(config.model.kind)}, {"horizon", n},
                        {"backward_induct", dp}, {"risk_neutral_dp", rn}};
        });
        out.suites.push_back(suite);
    }
    if (config.model.kind == ModelKind::Tabular) {
        VerifySuiteResult suite{"configured model exhaustive"};
        const MarkovModel model = build_model(config);
        const auto ex = oracle::exhaustive_policy_search(model, config.risk, config.horizon);
        const auto dp = backward_induct(model, config.risk, config.horizon).stage_values.front();
        record(suite, max_abs_diff(dp, ex.best_value), [&] {
            return json{{"model", model_json(model)}, {"risk", config.risk.to_string()},
                        {"depth", config.horizon}, {"backward_induct", dp},
                        {"exhaustive", ex.best_value}};
        });
        out.suites.push_back(suite);
    }

    std::string table;
    char line[160];
    std::snprintf(line, sizeof line, "%-30s %6s %12s  %s\n", "suite", "cases", "max_error",
                  "result");
    table += line;
    for (const auto& s : out.suites) {
        std::snprintf(line, sizeof line, "%-30s %6zu %12.3e  %s\n", s.name.c_str(), s.cases,
                      s.max_error, s.passed ? "PASS" : "FAIL");
        table += line;
        out.passed = out.passed && s.passed;
    }
    out.table = table;
    return out;
}

// Sweep --------------------------------------------------------------------

SweepOutput run_sweep(const RunConfig& config, const std::string& param,
                      const std::vector<double>& values) {
    if (param != "alpha" && param != "kappa")
        throw ConfigError("unknown sweep parameter '" + param + "' (expected alpha or kappa)");
    if (values.empty())
        throw ConfigError("sweep needs at least one value");

    SweepOutput out;
    out.csv = "param,value,N0,sweeps\n";
    for (double v : values) {
        RunConfig cfg = config;
        try {
            cfg.risk = param == "alpha" ? RiskSpec::avar(v) : RiskSpec::mean_deviation(v);
        } catch (const DomainError& e) {
            throw ConfigError("sweep " + param + "=" + format_double(v) + ": " + e.what());
        }
        const MarkovModel model = build_model(cfg);
        EpsilonSolveOptions opts;
        opts.tolerance = cfg.tolerance;
        opts.max_sweeps = cfg.max_sweeps;
        opts.epsilon = cfg.epsilon;
        opts.c_bar = tail_bound_per_stage(cfg, model);
        const auto rep = solve_epsilon_optimal(model, cfg.risk, base_policy(cfg, model), opts);

        SweepRow row;
        row.param = v;
        row.value_at_x0 = interpolate(model.grid(), rep.converged_value, initial_coordinate(cfg));
        row.n0 = rep.horizon;
        row.sweeps = rep.sweeps;
        row.converged = rep.status == SolveStatus::Converged;
        out.all_converged = out.all_converged && row.converged;
        out.csv += format_double(row.param) + "," + format_double(row.value_at_x0) + "," +
                   std::to_string(row.n0) + "," + std::to_string(row.sweeps) + "\n";
        out.rows.push_back(row);
    }
    if (param == "alpha") {
        auto sorted = out.rows;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const SweepRow& a, const SweepRow& b) { return a.param < b.param; });
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].value_at_x0 < sorted[i - 1].value_at_x0 - 1e-12)
                out.monotone = false;
    }
    return out;
}

} // namespace riskdp::app
