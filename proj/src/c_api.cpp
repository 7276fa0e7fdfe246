#include "riskdp/riskdp.h"

#include "riskdp/app.hpp"
#include "riskdp/errors.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct riskdp_config {
    riskdp::app::RunConfig cfg;
    std::size_t num_states = 0;
};

struct riskdp_report {
    riskdp::app::SolveOutput out;
};

namespace {

thread_local std::string last_error;

riskdp_status fail(riskdp_status code, const char* what) {
    last_error = what;
    return code;
}

// Runs body, translating exceptions into status codes.
template <typename F>
riskdp_status guarded(F&& body) noexcept {
    try {
        last_error.clear();
        return body();
    } catch (const riskdp::ConfigError& e) {
        return fail(RISKDP_CONFIG_ERROR, e.what());
    } catch (const riskdp::IoError& e) {
        return fail(RISKDP_IO_ERROR, e.what());
    } catch (const riskdp::DomainError& e) {
        return fail(RISKDP_DOMAIN_ERROR, e.what());
    } catch (const riskdp::ResourceError& e) {
        return fail(RISKDP_RESOURCE_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail(RISKDP_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(RISKDP_INTERNAL_ERROR, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

riskdp_status null_arg(const char* name) {
    last_error = std::string("null argument: ") + name;
    return RISKDP_DOMAIN_ERROR;
}

riskdp_status make_config(riskdp::app::RunConfig cfg, riskdp_config** out) {
    auto handle = std::make_unique<riskdp_config>();
    handle->num_states = riskdp::app::build_model(cfg).num_states();
    handle->cfg = std::move(cfg);
    *out = handle.release();
    return RISKDP_OK;
}

} // namespace

extern "C" {

const char* riskdp_version(void) { return "1.0.0"; }

const char* riskdp_last_error(void) { return last_error.c_str(); }

void riskdp_string_free(char* s) { std::free(s); }

riskdp_status riskdp_risk_evaluate(const char* risk_literal, const double* values,
                                   const double* probs, size_t n, double* out) {
    if (!risk_literal || !values || !probs || !out)
        return null_arg("risk_literal/values/probs/out");
    return guarded([&] {
        const auto spec = riskdp::parse_risk_literal(risk_literal);
        std::vector<riskdp::Atom> atoms(n);
        for (size_t i = 0; i < n; ++i)
            atoms[i] = {values[i], probs[i]};
        *out = riskdp::evaluate(spec, riskdp::DiscreteDistribution(std::move(atoms)));
        return RISKDP_OK;
    });
}

riskdp_status riskdp_config_load(const char* path, riskdp_config** out) {
    if (!path || !out)
        return null_arg("path/out");
    *out = nullptr;
    return guarded([&] { return make_config(riskdp::app::load_config(path), out); });
}

riskdp_status riskdp_config_parse(const char* json_text, const char* base_dir,
                                  riskdp_config** out) {
    if (!json_text || !out)
        return null_arg("json_text/out");
    *out = nullptr;
    return guarded([&] {
        return make_config(riskdp::app::parse_config(json_text, base_dir ? base_dir : "."), out);
    });
}

void riskdp_config_free(riskdp_config* config) { delete config; }

riskdp_status riskdp_config_set_risk(riskdp_config* config, const char* risk_literal) {
    if (!config || !risk_literal)
        return null_arg("config/risk_literal");
    return guarded([&] {
        try {
            config->cfg.risk = riskdp::parse_risk_literal(risk_literal);
        } catch (const riskdp::DomainError& e) {
            throw riskdp::ConfigError(std::string("config field 'risk': ") + e.what());
        }
        return RISKDP_OK;
    });
}

const char* riskdp_config_output_dir(const riskdp_config* config) {
    return config ? config->cfg.output_dir.c_str() : "";
}

size_t riskdp_config_num_states(const riskdp_config* config) {
    return config ? config->num_states : 0;
}

riskdp_status riskdp_solve(const riskdp_config* config, riskdp_report** out) {
    if (!config || !out)
        return null_arg("config/out");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<riskdp_report>();
        handle->out = riskdp::app::run_solve(config->cfg);
        *out = handle.release();
        return RISKDP_OK;
    });
}

void riskdp_report_free(riskdp_report* report) { delete report; }

int riskdp_report_converged(const riskdp_report* report) {
    return report && report->out.report.status == riskdp::SolveStatus::Converged ? 1 : 0;
}

size_t riskdp_report_sweeps(const riskdp_report* report) {
    return report ? report->out.report.sweeps : 0;
}

size_t riskdp_report_horizon(const riskdp_report* report) {
    return report ? report->out.report.horizon : 0;
}

double riskdp_report_last_residual(const riskdp_report* report) {
    return report ? report->out.report.last_residual() : 0.0;
}

double riskdp_report_value_at_x0(const riskdp_report* report) {
    return report ? report->out.value_at_x0 : 0.0;
}

size_t riskdp_report_num_states(const riskdp_report* report) {
    return report ? report->out.report.converged_value.size() : 0;
}

size_t riskdp_report_converged_value(const riskdp_report* report, double* out, size_t n) {
    if (!report || !out)
        return 0;
    const auto& v = report->out.report.converged_value;
    const size_t k = n < v.size() ? n : v.size();
    std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), out);
    return k;
}

riskdp_status riskdp_report_json(const riskdp_report* report, char** out) {
    if (!report || !out)
        return null_arg("report/out");
    return guarded([&] {
        *out = dup_string(report->out.report_json);
        return RISKDP_OK;
    });
}

riskdp_status riskdp_report_values_csv(const riskdp_report* report, char** out) {
    if (!report || !out)
        return null_arg("report/out");
    return guarded([&] {
        *out = dup_string(report->out.values_csv);
        return RISKDP_OK;
    });
}

riskdp_status riskdp_report_policy_csv(const riskdp_report* report, char** out) {
    if (!report || !out)
        return null_arg("report/out");
    return guarded([&] {
        *out = dup_string(report->out.policy_csv);
        return RISKDP_OK;
    });
}

riskdp_status riskdp_evaluate(const riskdp_config* config, const char* policy_csv,
                              char** values_csv) {
    if (!config || !policy_csv || !values_csv)
        return null_arg("config/policy_csv/values_csv");
    *values_csv = nullptr;
    return guarded([&] {
        *values_csv = dup_string(riskdp::app::run_evaluate(config->cfg, policy_csv));
        return RISKDP_OK;
    });
}

riskdp_status riskdp_verify(const riskdp_config* config, int corrupt_cap, int* passed,
                            char** table, char** counterexample_json) {
    if (!config || !passed || !table || !counterexample_json)
        return null_arg("config/passed/table/counterexample_json");
    *table = nullptr;
    *counterexample_json = nullptr;
    return guarded([&] {
        riskdp::app::VerifyOptions opts;
        opts.corrupt_cap = corrupt_cap != 0;
        const auto outcome = riskdp::app::run_verify(config->cfg, opts);
        *passed = outcome.passed ? 1 : 0;
        *table = dup_string(outcome.table);
        *counterexample_json = dup_string(outcome.counterexample_json);
        return outcome.passed ? RISKDP_OK : RISKDP_VERIFY_FAILED;
    });
}

riskdp_status riskdp_sweep(const riskdp_config* config, const char* param, const double* values,
                           size_t n, char** csv, int* monotone) {
    if (!config || !param || (!values && n) || !csv || !monotone)
        return null_arg("config/param/values/csv/monotone");
    *csv = nullptr;
    return guarded([&] {
        const auto result =
            riskdp::app::run_sweep(config->cfg, param, std::vector<double>(values, values + n));
        *csv = dup_string(result.csv);
        *monotone = result.monotone ? 1 : 0;
        return result.all_converged ? RISKDP_OK : RISKDP_NOT_CONVERGED;
    });
}

} // extern "C"
