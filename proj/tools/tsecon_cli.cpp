// tsecon: unit roots, breaks, lag selection, cointegration, VECM/VAR,
// causality and diagnostics for the TRADE / financial-development system.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsecon/pipeline/montecarlo.hpp"
#include "tsecon/pipeline/pipeline.hpp"

namespace {

using namespace tsecon;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitComputation = 2;

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::schema:
        case ErrorKind::continuity:
        case ErrorKind::parse:
        case ErrorKind::validation:
        case ErrorKind::io: return kExitValidation;
        default: return kExitComputation;
    }
}

struct CommonOptions {
    std::optional<std::string> data;
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<double> level;
    std::optional<std::string> format;
    bool replicate = false;
    std::optional<int> equation;
    std::optional<int> lag;
    std::optional<int> max_lag;
    std::optional<std::string> det_case;
};

PipelineConfig build_config(const CommonOptions& o) {
    PipelineConfig cfg;
    if (o.config) cfg = load_config(*o.config, cfg);
    if (o.data) cfg.data_path = *o.data;
    if (o.out) cfg.out_dir = *o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (o.level) cfg.level = *o.level;
    if (o.format) cfg.format = parse_format(*o.format);
    if (o.replicate) cfg.replicate = true;
    if (o.equation) cfg.equations = {*o.equation};
    if (o.lag) cfg.lag = *o.lag;
    if (o.max_lag) cfg.max_lag = *o.max_lag;
    if (o.det_case) cfg.det_case = parse_johansen_case(*o.det_case);
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* app, CommonOptions& o, bool with_equation) {
    app->add_option("--data", o.data, "CSV snapshot path");
    app->add_option("--config", o.config, "key = value configuration file");
    app->add_option("--out", o.out, "output directory");
    app->add_option("--seed", o.seed, "RNG seed");
    app->add_option("--level", o.level, "significance level");
    app->add_option("--format", o.format, "md, csv or json");
    app->add_flag("--replicate", o.replicate, "pin lag choices to the replication settings");
    if (with_equation) {
        app->add_option("--equation", o.equation, "equation id (1, 2 or 3)");
        app->add_option("--lag", o.lag, "estimation lag of the levels VAR");
        app->add_option("--max-lag", o.max_lag, "largest lag considered in lag selection");
        app->add_option("--case", o.det_case, "Johansen deterministic case (1-5 or name)");
    }
}

void emit(const std::vector<Table>& tables, const PipelineConfig& cfg) {
    const auto paths = write_tables(tables, cfg.out_dir, cfg.format);
    for (const auto& t : tables) std::cout << render_markdown(t) << '\n';
    std::cout << "wrote " << paths.size() << " files to " << cfg.out_dir << '\n';
}

Dataset load_data(const PipelineConfig& cfg) { return load_csv(cfg.data_path, DataSchema::india_1980_2019()); }

/// A stage the subcommand needs did not run: report the error that stopped the chain.
void require(const EquationResult& r, bool available) {
    if (available) return;
    if (r.errors.empty()) throw Error(ErrorKind::empty_result, "requested result not produced");
    const auto& e = r.errors.back();
    throw Error(e.kind, "equation " + std::to_string(e.equation) + ", stage " + e.stage + ": " + e.message);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-series econometrics: financial development and trade openness"};
    app.require_subcommand(1);

    CommonOptions o;
    std::vector<std::string> ur_roles;
    auto* unitroot = app.add_subcommand("unitroot", "Perron, ADF and KPSS tests on levels and differences");
    add_common(unitroot, o, false);
    unitroot->add_option("--series", ur_roles, "roles to test (default all)")->delimiter(',');

    auto* breaks = app.add_subcommand("breaks", "sequential Bai-Perron tests on the static regression");
    add_common(breaks, o, true);
    auto* lagselect = app.add_subcommand("lagselect", "VAR lag-order selection table");
    add_common(lagselect, o, true);
    auto* johansen = app.add_subcommand("johansen", "Johansen trace and max-eigenvalue tests");
    add_common(johansen, o, true);
    std::optional<int> rank;
    auto* vecm = app.add_subcommand("vecm", "VECM estimates");
    add_common(vecm, o, true);
    vecm->add_option("--rank", rank, "cointegrating rank (default: trace-test choice)");
    auto* var = app.add_subcommand("var", "levels VAR coefficients");
    add_common(var, o, true);
    auto* causality = app.add_subcommand("causality", "VECM or VAR Granger causality, chosen by the rank test");
    add_common(causality, o, true);
    auto* diagnose = app.add_subcommand("diagnose", "residual diagnostics and VIFs");
    add_common(diagnose, o, true);
    auto* pipeline = app.add_subcommand("pipeline", "full analysis for the configured equations");
    add_common(pipeline, o, false);
    std::optional<std::string> eq_list;
    pipeline->add_option("--equations", eq_list, "comma-separated equation ids");

    std::string experiment = "all";
    int mc_T = 200;
    int mc_reps = 2000;
    auto* montecarlo = app.add_subcommand("montecarlo", "size experiments under each test's null");
    add_common(montecarlo, o, false);
    montecarlo->add_option("--experiment", experiment, "experiment name or 'all'");
    montecarlo->add_option("--T", mc_T, "sample size");
    montecarlo->add_option("--reps", mc_reps, "replications");

    auto* export_series = app.add_subcommand("export-series", "series levels as plot-ready CSV");
    add_common(export_series, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        PipelineConfig cfg = build_config(o);
        if (eq_list) {
            std::istringstream in("equations = " + *eq_list);
            apply_config(cfg, in);
            cfg.validate();
        }
        const int eq = cfg.equations.front();

        if (*unitroot) {
            const Dataset d = load_data(cfg);
            std::vector<std::string> roles = ur_roles.empty() ? d.roles() : ur_roles;
            for (const auto& r : roles) (void)d.get(r);
            std::vector<StageError> errors;
            const auto entries = unit_root_battery(d, roles, cfg.trimming, errors);
            AnalysisReport rep;
            rep.errors = errors;
            emit({perron_table(entries), adf_kpss_table(entries), errors_table(rep)}, cfg);
            return kExitOk;
        }
        if (*montecarlo) {
            std::vector<std::string> names =
                experiment == "all" ? size_experiments() : std::vector<std::string>{experiment};
            Table t;
            t.tag = "montecarlo";
            t.title = "Monte Carlo size (T = " + std::to_string(mc_T) + ", " + std::to_string(mc_reps) +
                      " replications, nominal " + format_full(cfg.level) + ")";
            t.columns = {"Experiment", "Replications", "Failures", "Rejections", "Rate"};
            for (const auto& n : names) {
                const auto r = size_experiment(n, mc_T, mc_reps, cfg.seed, cfg.level);
                t.add({Cell::str(n), Cell::whole(r.replications), Cell::whole(r.failures), Cell::whole(r.rejections),
                       Cell::num(r.rate(), 4)});
            }
            emit({t}, cfg);
            return kExitOk;
        }
        if (*export_series) {
            emit({series_table(load_data(cfg))}, cfg);
            return kExitOk;
        }
        if (*pipeline) {
            const AnalysisReport rep = run_pipeline(cfg);
            const auto paths = render_report(rep, cfg.out_dir, cfg.format);
            std::size_t nerr = rep.errors.size();
            for (const auto& e : rep.equations) {
                nerr += e.errors.size();
                std::cout << "equation " << e.spec.id << ": lag " << e.lag;
                if (e.johansen) std::cout << ", rank " << e.johansen->selected_rank << (e.vecm ? " (VECM)" : " (VAR)");
                if (e.breaks) std::cout << ", " << e.breaks->num_breaks << " breaks";
                if (e.aborted) std::cout << ", aborted";
                std::cout << '\n';
            }
            std::cout << "wrote " << paths.size() << " files to " << cfg.out_dir << " (" << nerr
                      << " stage errors recorded)\n";
            return kExitOk;
        }

        const Dataset data = load_data(cfg);
        const EquationSpec spec = equation_spec(eq);
        const Dataset d = data.select(spec.roles());

        if (*breaks) {
            const auto m = detail::static_break_model(data, spec, cfg.trimming);
            emit({breaks_table(eq, sequential_breaks(m))}, cfg);
            return kExitOk;
        }
        if (*lagselect) {
            const int max_p = cfg.replicate ? replication_pins(eq).max_lag : cfg.max_lag;
            emit({lag_selection_table(eq, lag_order_select(d, max_p, Deterministic::intercept, cfg.level))}, cfg);
            return kExitOk;
        }
        const EquationResult r = run_equation(data, cfg, eq);
        if (*johansen) {
            require(r, r.johansen.has_value());
            emit({johansen_table(eq, *r.johansen)}, cfg);
        } else if (*vecm) {
            require(r, r.johansen.has_value());
            const int use_rank = rank.value_or(r.johansen->selected_rank);
            if (use_rank == 0) throw Error(ErrorKind::empty_result, "rank 0: no error-correction term; use 'var'");
            const VecmFit v = vecm_fit(d, r.lag + 1, use_rank, cfg.det_case);
            emit({vecm_table(eq, v, cfg.level)}, cfg);
        } else if (*var) {
            const int p = r.lag > 0 ? r.lag : 1;
            emit({var_table(eq, var_fit(d, p, Deterministic::intercept))}, cfg);
        } else if (*causality) {
            require(r, !r.causality.empty());
            Table c = causality_table(eq, spec.roles(), r.causality, r.vecm.has_value());
            if (r.vecm) fill_ect_coefficients(c, *r.vecm);
            emit({c}, cfg);
        } else if (*diagnose) {
            require(r, r.diagnostics.has_value());
            emit({diagnostics_table(eq, *r.diagnostics)}, cfg);
        }
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
}
