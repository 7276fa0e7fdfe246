// riskdp: batch front end for the risk-averse dynamic-programming solver.
//
//   riskdp solve    --config run.json
//   riskdp evaluate --config run.json --policy policy.csv [--out values.csv]
//   riskdp verify   --config run.json
//   riskdp sweep    --config run.json --param alpha --values 0,0.1,0.2
//
// Exit codes: 0 ok, 1 verification failure, 2 config error,
// 3 non-convergence, 4 I/O error.

#include "riskdp/riskdp.h"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitIo = 4;

struct IoFailure {
    std::string what;
};

int exit_code(riskdp_status st) {
    switch (st) {
    case RISKDP_OK:
        return 0;
    case RISKDP_VERIFY_FAILED:
    case RISKDP_INTERNAL_ERROR:
        return kExitVerify;
    case RISKDP_CONFIG_ERROR:
    case RISKDP_DOMAIN_ERROR:
    case RISKDP_RESOURCE_ERROR:
        return kExitConfig;
    case RISKDP_NOT_CONVERGED:
        return kExitNotConverged;
    case RISKDP_IO_ERROR:
        return kExitIo;
    }
    return kExitVerify;
}

int report_failure(riskdp_status st) {
    std::cerr << "riskdp: " << riskdp_last_error() << "\n";
    return exit_code(st);
}

struct ConfigDeleter {
    void operator()(riskdp_config* c) const { riskdp_config_free(c); }
};
struct ReportDeleter {
    void operator()(riskdp_report* r) const { riskdp_report_free(r); }
};
struct StringDeleter {
    void operator()(char* s) const { riskdp_string_free(s); }
};
using ConfigPtr = std::unique_ptr<riskdp_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<riskdp_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure{"cannot open '" + path + "'"};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out)
        throw IoFailure{"cannot write '" + path.string() + "'"};
}

struct Common {
    std::string config_path;
    std::string output_dir;
};

std::filesystem::path output_dir(const Common& c, const riskdp_config* cfg) {
    return c.output_dir.empty() ? std::filesystem::path(riskdp_config_output_dir(cfg))
                                : std::filesystem::path(c.output_dir);
}

int load(const Common& c, ConfigPtr& out) {
    riskdp_config* raw = nullptr;
    const riskdp_status st = riskdp_config_load(c.config_path.c_str(), &raw);
    out.reset(raw);
    return st == RISKDP_OK ? 0 : report_failure(st);
}

int cmd_solve(const Common& c) {
    ConfigPtr cfg;
    if (int rc = load(c, cfg))
        return rc;
    riskdp_report* raw = nullptr;
    if (riskdp_status st = riskdp_solve(cfg.get(), &raw); st != RISKDP_OK)
        return report_failure(st);
    ReportPtr rep(raw);

    char* text = nullptr;
    const auto dir = output_dir(c, cfg.get());
    riskdp_report_json(rep.get(), &text);
    write_file(dir / "report.json", StringPtr(text).get());
    riskdp_report_values_csv(rep.get(), &text);
    write_file(dir / "values.csv", StringPtr(text).get());
    riskdp_report_policy_csv(rep.get(), &text);
    write_file(dir / "policy.csv", StringPtr(text).get());

    if (!riskdp_report_converged(rep.get())) {
        std::cerr << "riskdp: value iteration did not converge after "
                  << riskdp_report_sweeps(rep.get())
                  << " sweeps (last residual " << riskdp_report_last_residual(rep.get()) << ")\n";
        return kExitNotConverged;
    }
    std::cout << "converged in " << riskdp_report_sweeps(rep.get()) << " sweeps; N0 = "
              << riskdp_report_horizon(rep.get()) << "; V*(x0) = "
              << riskdp_report_value_at_x0(rep.get()) << "\n";
    return 0;
}

int cmd_evaluate(const Common& c, const std::string& policy_path, const std::string& out_path) {
    ConfigPtr cfg;
    if (int rc = load(c, cfg))
        return rc;
    const std::string policy = read_file(policy_path);
    char* raw = nullptr;
    if (riskdp_status st = riskdp_evaluate(cfg.get(), policy.c_str(), &raw); st != RISKDP_OK)
        return report_failure(st);
    StringPtr csv(raw);
    if (out_path.empty())
        std::cout << csv.get();
    else
        write_file(out_path, csv.get());
    return 0;
}

int cmd_verify(const Common& c, bool corrupt_cap) {
    ConfigPtr cfg;
    if (int rc = load(c, cfg))
        return rc;
    int passed = 0;
    char* table = nullptr;
    char* dump = nullptr;
    const riskdp_status st = riskdp_verify(cfg.get(), corrupt_cap ? 1 : 0, &passed, &table, &dump);
    StringPtr table_ptr(table);
    StringPtr dump_ptr(dump);
    if (st != RISKDP_OK && st != RISKDP_VERIFY_FAILED)
        return report_failure(st);
    std::cout << table_ptr.get();
    if (!passed) {
        const auto path = output_dir(c, cfg.get()) / "counterexample.json";
        write_file(path, dump_ptr.get());
        std::cerr << "riskdp: verification failed; counterexample written to " << path.string()
                  << "\n";
        return kExitVerify;
    }
    return 0;
}

int cmd_sweep(const Common& c, const std::string& param, const std::vector<double>& values) {
    ConfigPtr cfg;
    if (int rc = load(c, cfg))
        return rc;
    char* raw = nullptr;
    int monotone = 1;
    const riskdp_status st =
        riskdp_sweep(cfg.get(), param.c_str(), values.data(), values.size(), &raw, &monotone);
    StringPtr csv(raw);
    if (st != RISKDP_OK && st != RISKDP_NOT_CONVERGED)
        return report_failure(st);
    write_file(output_dir(c, cfg.get()) / "sweep.csv", csv.get());
    std::cout << csv.get();
    if (st == RISKDP_NOT_CONVERGED) {
        std::cerr << "riskdp: at least one sweep point did not converge\n";
        return kExitNotConverged;
    }
    if (!monotone) {
        std::cerr << "riskdp: V*(x0) is not nondecreasing in alpha\n";
        return kExitVerify;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-averse dynamic programming for discounted Markov control models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(riskdp_version()));

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", common.config_path, "Run configuration (JSON)")->required();
        sub->add_option("-o,--output-dir", common.output_dir,
                        "Directory for output files (overrides the config's output_dir)");
    };

    auto* solve = app.add_subcommand("solve", "Value iteration plus epsilon-optimal policy");
    add_common(solve);

    std::string policy_path;
    std::string out_path;
    auto* evaluate = app.add_subcommand("evaluate", "Nested value of a fixed policy");
    add_common(evaluate);
    evaluate->add_option("-p,--policy", policy_path, "Policy CSV (stage,state,action)")
        ->required();
    evaluate->add_option("--out", out_path, "Write values CSV here instead of standard output");

    bool corrupt_cap = false;
    auto* verify = app.add_subcommand("verify", "Run the oracle-agreement suites");
    add_common(verify);
    verify->add_flag("--corrupt-cap", corrupt_cap, "Harness self-test: use a wrong AV@R cap");

    std::string param;
    std::vector<double> values;
    auto* sweep = app.add_subcommand("sweep", "Re-solve over a risk parameter");
    add_common(sweep);
    sweep->add_option("--param", param, "alpha or kappa")->required();
    sweep->add_option("--values", values, "Comma-separated parameter values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*solve)
            return cmd_solve(common);
        if (*evaluate)
            return cmd_evaluate(common, policy_path, out_path);
        if (*verify)
            return cmd_verify(common, corrupt_cap);
        if (*sweep)
            return cmd_sweep(common, param, values);
    } catch (const IoFailure& e) {
        std::cerr << "riskdp: " << e.what << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
