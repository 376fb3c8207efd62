#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsecon/breaks/bai_perron.hpp"
#include "tsecon/coint/johansen.hpp"
#include "tsecon/coint/vecm.hpp"
#include "tsecon/diagnostics/diagnostics.hpp"
#include "tsecon/ingest/csv.hpp"
#include "tsecon/pipeline/config.hpp"
#include "tsecon/pipeline/report.hpp"
#include "tsecon/unitroot/unitroot.hpp"
#include "tsecon/var/var.hpp"

namespace tsecon {

/// TRADE = f(X, LGDP, REER) with X one of the financial-development indices.
struct EquationSpec {
    int id = 1;
    std::string finance_role;  // FD, FID or FMD
    std::vector<std::string> roles() const { return {"TRADE", finance_role, "LGDP", "REER"}; }
};

inline EquationSpec equation_spec(int id) {
    switch (id) {
        case 1: return {1, "FD"};
        case 2: return {2, "FID"};
        case 3: return {3, "FMD"};
        default: throw Error(ErrorKind::validation, "unknown equation id " + std::to_string(id));
    }
}

/// Lag-selection ceiling and estimation lag pinned for replication runs.
struct ReplicationPins {
    int max_lag;
    int lag;
};

inline ReplicationPins replication_pins(int id) {
    switch (id) {
        case 1: return {5, 5};
        case 2: return {4, 2};
        case 3: return {5, 5};
        default: throw Error(ErrorKind::validation, "unknown equation id " + std::to_string(id));
    }
}

struct StageError {
    int equation = 0;
    std::string stage;
    ErrorKind kind = ErrorKind::validation;
    std::string message;
};

struct CausalityEntry {
    std::string cause;
    std::string effect;
    TestResult short_run;
    std::optional<TestResult> long_run;  // ECT t-test in the effect equation
};

struct DiagnosticReport {
    std::string model;  // which fitted equation the residual tests use
    std::vector<TestResult> breusch_godfrey;  // lags 1..4
    std::optional<TestResult> jarque_bera;
    std::optional<WhiteResult> white;
    std::optional<ResetResult> reset;
    std::vector<VifEntry> vif;
    std::string vif_basis;
};

struct EquationResult {
    EquationSpec spec;
    std::optional<BreakResult> breaks;
    std::optional<LagSelectionTable> lag_selection;
    int lag = 0;  // levels VAR lag used for estimation
    std::optional<JohansenResult> johansen;
    std::optional<VecmFit> vecm;
    std::optional<VarFit> var;
    std::vector<CausalityEntry> causality;
    std::optional<DiagnosticReport> diagnostics;
    std::vector<StageError> errors;
    bool aborted = false;

    const CausalityEntry* granger(const std::string& cause, const std::string& effect) const {
        for (const auto& c : causality) {
            if (c.cause == cause && c.effect == effect) return &c;
        }
        return nullptr;
    }
};

struct UnitRootEntry {
    std::string role;
    std::string test;  // ADF, KPSS, Perron
    Deterministic det = Deterministic::intercept;
    std::optional<UnitRootResult> level;
    std::optional<UnitRootResult> difference;
};

struct AnalysisReport {
    PipelineConfig config;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> caveats;
    std::vector<UnitRootEntry> unit_roots;
    std::vector<EquationResult> equations;
    std::vector<StageError> errors;  // stages not tied to one equation

    const EquationResult* equation(int id) const {
        for (const auto& e : equations) {
            if (e.spec.id == id) return &e;
        }
        return nullptr;
    }
};

namespace detail {

template <class F>
bool guarded(std::vector<StageError>& errors, int equation, const std::string& stage, F&& f) {
    try {
        f();
        return true;
    } catch (const Error& e) {
        errors.push_back({equation, stage, e.kind(), e.what()});
    } catch (const std::exception& e) {
        errors.push_back({equation, stage, ErrorKind::validation, e.what()});
    }
    return false;
}

inline BreakModel static_break_model(const Dataset& d, const EquationSpec& spec, double trimming) {
    BreakModel m;
    const Index T = static_cast<Index>(d.num_obs());
    m.y.resize(T);
    m.X.resize(T, 4);
    const auto roles = spec.roles();
    for (Index t = 0; t < T; ++t) {
        const auto u = static_cast<std::size_t>(t);
        m.y(t) = d.get("TRADE")[u];
        m.X(t, 0) = 1.0;
        for (Index j = 1; j < 4; ++j) m.X(t, j) = d.get(roles[static_cast<std::size_t>(j)])[u];
    }
    m.trimming = trimming;
    m.max_breaks = 5;
    m.start_year = d.start_year();
    return m;
}

inline Matrix static_regressors(const Dataset& d, const EquationSpec& spec) {
    const auto roles = spec.roles();
    const Index T = static_cast<Index>(d.num_obs());
    Matrix X(T, 3);
    for (Index j = 0; j < 3; ++j) {
        const auto& s = d.get(roles[static_cast<std::size_t>(j + 1)]);
        for (Index t = 0; t < T; ++t) X(t, j) = s[static_cast<std::size_t>(t)];
    }
    return X;
}

inline void run_diagnostics(EquationResult& r, const Dataset& d, const SystemFit& fit, const std::string& model,
                            const Matrix& vif_X, const std::vector<std::string>& vif_labels,
                            const std::string& vif_basis, double level) {
    DiagnosticReport dr;
    dr.model = model;
    dr.vif_basis = vif_basis;
    const int id = r.spec.id;
    for (int l = 1; l <= 4; ++l) {
        guarded(r.errors, id, "diagnostics.breusch_godfrey", [&] { dr.breusch_godfrey.push_back(breusch_godfrey(fit, l, 0, level)); });
    }
    guarded(r.errors, id, "diagnostics.jarque_bera", [&] { dr.jarque_bera = jarque_bera(Vector(fit.residuals.col(0)), level); });
    guarded(r.errors, id, "diagnostics.white", [&] { dr.white = white_test(fit, std::nullopt, 0, level); });
    guarded(r.errors, id, "diagnostics.reset", [&] { dr.reset = ramsey_reset(fit, 2, 0, level); });
    guarded(r.errors, id, "diagnostics.vif", [&] { dr.vif = vif(vif_X, vif_labels); });
    (void)d;
    r.diagnostics = std::move(dr);
}

}  // namespace detail

/// Full per-equation chain. Stage failures are recorded and stop the chain.
inline EquationResult run_equation(const Dataset& data, const PipelineConfig& cfg, int id) {
    EquationResult r;
    r.spec = equation_spec(id);
    const Dataset d = data.select(r.spec.roles());
    const auto stage = [&](const std::string& name, auto&& f) {
        if (r.aborted) return;
        if (!detail::guarded(r.errors, id, name, f)) r.aborted = true;
    };
    stage("breaks", [&] { r.breaks = sequential_breaks(detail::static_break_model(data, r.spec, cfg.trimming)); });
    stage("lag_selection", [&] {
        const int max_p = cfg.replicate ? replication_pins(id).max_lag : cfg.max_lag;
        r.lag_selection = lag_order_select(d, max_p, Deterministic::intercept, cfg.level);
        r.lag = cfg.replicate ? replication_pins(id).lag : std::max(1, r.lag_selection->aic_selected);
        if (cfg.lag) r.lag = *cfg.lag;
    });
    // The Johansen/VECM system carries as many lagged differences as the levels VAR has lags.
    stage("johansen", [&] { r.johansen = johansen_test(d, r.lag + 1, cfg.det_case); });
    if (r.aborted) return r;
    const auto roles = r.spec.roles();
    if (r.johansen->selected_rank > 0) {
        stage("vecm", [&] { r.vecm = vecm_fit(d, r.lag + 1, r.johansen->selected_rank, cfg.det_case); });
        stage("causality", [&] {
            for (const auto& effect : roles) {
                for (const auto& cause : roles) {
                    if (cause == effect) continue;
                    const auto g = vecm_granger(*r.vecm, cause, effect, cfg.level);
                    r.causality.push_back({cause, effect, g.short_run, g.long_run});
                }
            }
        });
        if (r.aborted) return r;
        detail::run_diagnostics(r, d, r.vecm->fit, "D(TRADE) equation of the VECM",
                                detail::static_regressors(data, r.spec), {roles[1], roles[2], roles[3]},
                                "levels regression TRADE ~ C + " + roles[1] + " + LGDP + REER", cfg.level);
    } else {
        stage("var", [&] { r.var = var_fit(d, r.lag, Deterministic::intercept); });
        stage("causality", [&] {
            for (const auto& effect : roles) {
                for (const auto& cause : roles) {
                    if (cause == effect) continue;
                    r.causality.push_back({cause, effect, var_granger(*r.var, cause, effect, cfg.level), std::nullopt});
                }
            }
        });
        if (r.aborted) return r;
        const auto& dm = r.var->design;
        const Index nlag = dm.regressors.cols() - 1;
        std::vector<std::string> labels(dm.column_labels.begin(), dm.column_labels.begin() + nlag);
        detail::run_diagnostics(r, d, r.var->fit, "TRADE equation of the VAR", dm.regressors.leftCols(nlag), labels,
                                "VAR lag regressors", cfg.level);
    }
    return r;
}

inline std::vector<std::string> data_vintage(const std::string& path) {
    std::vector<std::string> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() != '#') break;
        out.push_back(detail::trim(t.substr(1)));
    }
    return out;
}

inline std::vector<UnitRootEntry> unit_root_battery(const Dataset& d, const std::vector<std::string>& roles,
                                                    double trimming, std::vector<StageError>& errors) {
    std::vector<UnitRootEntry> out;
    auto run = [&](const std::string& role, const std::string& test, Deterministic det, auto&& fn) {
        UnitRootEntry e;
        e.role = role;
        e.test = test;
        e.det = det;
        const Series& s = d.get(role);
        const std::string tag = "unitroot." + test + "." + role;
        detail::guarded(errors, 0, tag + ".level", [&] { e.level = fn(s); });
        detail::guarded(errors, 0, tag + ".difference", [&] { e.difference = fn(diff(s, 1)); });
        out.push_back(std::move(e));
    };
    PerronOptions po;
    po.trimming = trimming;
    for (const auto& role : roles) {
        run(role, "Perron", Deterministic::intercept_trend, [&](const Series& s) { return perron_test(s, po); });
    }
    for (const Deterministic det : {Deterministic::intercept, Deterministic::intercept_trend}) {
        for (const auto& role : roles) run(role, "ADF", det, [&](const Series& s) { return adf_test(s, det); });
    }
    for (const Deterministic det : {Deterministic::intercept, Deterministic::intercept_trend}) {
        for (const auto& role : roles) run(role, "KPSS", det, [&](const Series& s) { return kpss_test(s, det); });
    }
    return out;
}

/// Notes for every series whose Perron decision differs between the
/// intercept-and-trend break model and the single-component variants.
inline std::vector<std::string> perron_variant_flags(const Dataset& d, const std::vector<std::string>& roles,
                                                     double trimming) {
    std::vector<std::string> out;
    const std::pair<PerronModel, const char*> variants[] = {{PerronModel::intercept_break, "intercept-break"},
                                                             {PerronModel::trend_break, "trend-break"}};
    for (const auto& role : roles) {
        for (int order = 0; order <= 1; ++order) {
            const Series s = order ? diff(d.get(role), 1) : d.get(role);
            PerronOptions po;
            po.trimming = trimming;
            bool base = false;
            try {
                base = perron_test(s, po).rejects();
            } catch (const Error&) {
                continue;
            }
            for (const auto& [model, name] : variants) {
                po.model = model;
                try {
                    const UnitRootResult r = perron_test(s, po);
                    if (r.rejects() != base) {
                        out.push_back("Perron decision for " + std::string(order ? "D(" + role + ")" : role) +
                                      " changes under the " + name + " variant (statistic " + format_full(std::round(r.statistic * 100.0) / 100.0) + ").");
                    }
                } catch (const Error&) {
                }
            }
        }
    }
    return out;
}

/// Unit roots once for every variable in use, then each equation as its
/// own task; results are merged in configuration order.
inline AnalysisReport run_pipeline(const Dataset& data, const PipelineConfig& cfg) {
    cfg.validate();
    AnalysisReport rep;
    rep.config = cfg;
    rep.metadata.emplace_back("data", cfg.data_path);
    for (const auto& v : data_vintage(cfg.data_path)) rep.metadata.emplace_back("data_note", v);
    rep.metadata.emplace_back("sample", std::to_string(data.start_year()) + "-" + std::to_string(data.end_year()));
    std::string eqs;
    for (int e : cfg.equations) eqs += (eqs.empty() ? "" : ",") + std::to_string(e);
    rep.metadata.emplace_back("equations", eqs);
    rep.metadata.emplace_back("deterministic", std::string(to_string(cfg.det_case)));
    rep.metadata.emplace_back("max_lag", cfg.replicate ? "pinned per equation" : std::to_string(cfg.max_lag));
    if (cfg.lag) rep.metadata.emplace_back("lag", std::to_string(*cfg.lag));
    rep.metadata.emplace_back("trimming", format_full(cfg.trimming));
    rep.metadata.emplace_back("level", format_full(cfg.level));
    rep.metadata.emplace_back("replicate", cfg.replicate ? "true" : "false");

    rep.caveats = {
        "Critical values for Johansen, Perron and Bai-Perron tests are tabulated at fixed levels; their p-value cells are empty.",
        "Johansen rank is chosen by the trace test; the max-eigenvalue choice is shown alongside.",
        "White test omits cross products when the model has more than five non-constant regressors and is not computed when the auxiliary regression would have as many regressors as observations.",
        "RESET adds the squared fitted value only.",
        "VIFs for cointegrated equations use the static levels regression; for the VAR they use the lag regressors.",
        "ADF and KPSS critical values are finite-sample MacKinnon and asymptotic KPSS values respectively.",
        "Bai-Perron breaks are estimated on each equation's static levels regression of TRADE on a constant and the three other variables.",
    };

    std::vector<std::string> roles{"TRADE"};
    for (int e : cfg.equations) roles.push_back(equation_spec(e).finance_role);
    roles.push_back("LGDP");
    roles.push_back("REER");

    std::vector<std::future<EquationResult>> futs;
    std::vector<EquationResult> done;
    const bool parallel = cfg.threads != 1;
    for (int e : cfg.equations) {
        if (parallel) {
            futs.push_back(std::async(std::launch::async, [&data, &cfg, e] { return run_equation(data, cfg, e); }));
        } else {
            done.push_back(run_equation(data, cfg, e));
        }
    }
    rep.unit_roots = unit_root_battery(data, roles, cfg.trimming, rep.errors);
    for (auto& note : perron_variant_flags(data, roles, cfg.trimming)) rep.caveats.push_back(std::move(note));
    for (auto& f : futs) done.push_back(f.get());
    rep.equations = std::move(done);
    return rep;
}

inline AnalysisReport run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const Dataset data = load_csv(cfg.data_path, DataSchema::india_1980_2019());
    return run_pipeline(data, cfg);
}

// ---------------------------------------------------------------------------
// Table builders

namespace detail {

inline Cell p_cell(double p) { return std::isnan(p) ? Cell::blank() : Cell::num(p, 4); }
inline Cell yes_no(bool b) { return Cell::str(b ? "Yes" : "No"); }

inline std::string order_remark(const std::optional<UnitRootResult>& r, bool stationarity_null) {
    if (!r) return "n/a";
    const bool stationary = stationarity_null ? !r->rejects() : r->rejects();
    return stationary ? "I(0)" : "I(1)";
}

}  // namespace detail

inline Table perron_table(const std::vector<UnitRootEntry>& entries) {
    Table t;
    t.tag = "table_1";
    t.title = "Perron unit root tests (innovational outlier, break in intercept and trend)";
    t.columns = {"Variable", "Level statistic", "Level break year", "Level lags", "Critical value (5%)", "Level remark",
                 "Difference statistic", "Difference break year", "Difference lags", "Difference remark"};
    for (const auto& e : entries) {
        if (e.test != "Perron") continue;
        auto stat = [](const std::optional<UnitRootResult>& r) { return r ? Cell::num(r->statistic, 2) : Cell::blank(); };
        auto brk = [](const std::optional<UnitRootResult>& r) {
            return r && r->break_year ? Cell::whole(*r->break_year) : Cell::blank();
        };
        auto lags = [](const std::optional<UnitRootResult>& r) { return r ? Cell::whole(r->lags_used) : Cell::blank(); };
        t.add({Cell::str(e.role), stat(e.level), brk(e.level), lags(e.level),
               Cell::num(CriticalValueTable::perron_value(Level::five_pct), 2),
               Cell::str(detail::order_remark(e.level, false)), stat(e.difference), brk(e.difference),
               lags(e.difference), Cell::str(detail::order_remark(e.difference, false))});
    }
    return t;
}

inline Table adf_kpss_table(const std::vector<UnitRootEntry>& entries) {
    Table t;
    t.tag = "table_A1";
    t.title = "ADF and KPSS stationarity tests";
    t.columns = {"Deterministic terms", "Test", "Variable", "Level statistic", "Level critical (5%)", "Level lags",
                 "Level remark", "Difference statistic", "Difference critical (5%)", "Difference lags",
                 "Difference remark"};
    for (const char* test : {"ADF", "KPSS"}) {
        for (const auto& e : entries) {
            if (e.test != test) continue;
            const bool kpss = e.test == "KPSS";
            auto stat = [&](const std::optional<UnitRootResult>& r) {
                return r ? Cell::num(r->statistic, kpss ? 3 : 2) : Cell::blank();
            };
            auto cv = [&](const std::optional<UnitRootResult>& r) {
                return r ? Cell::num(r->critical_value_5pct, kpss ? 3 : 2) : Cell::blank();
            };
            auto lags = [](const std::optional<UnitRootResult>& r) { return r ? Cell::whole(r->lags_used) : Cell::blank(); };
            t.add({Cell::str(e.det == Deterministic::intercept ? "Intercept" : "Intercept & Trend"), Cell::str(e.test),
                   Cell::str(e.role), stat(e.level), cv(e.level), lags(e.level),
                   Cell::str(detail::order_remark(e.level, kpss)), stat(e.difference), cv(e.difference),
                   lags(e.difference), Cell::str(detail::order_remark(e.difference, kpss))});
        }
    }
    return t;
}

inline std::string lag_tag(int id) { return "table_" + std::to_string(id + 1); }

inline Table lag_selection_table(int equation, const LagSelectionTable& tab) {
    Table t;
    t.tag = equation > 0 ? lag_tag(equation) : "lag_selection";
    t.equation = equation;
    t.title = "Lag selection criteria (T = " + std::to_string(tab.t_eff) + ")";
    t.columns = {"Lag", "LogL", "LR", "FPE", "AIC", "SC", "HQ", "Selected by"};
    for (const auto& r : tab.rows) {
        std::string sel;
        auto mark = [&](int chosen, const char* name) {
            if (chosen == r.lag) sel += (sel.empty() ? "" : " ") + std::string(name);
        };
        mark(tab.lr_selected, "LR");
        mark(tab.fpe_selected, "FPE");
        mark(tab.aic_selected, "AIC");
        mark(tab.sc_selected, "SC");
        mark(tab.hq_selected, "HQ");
        t.add({Cell::whole(r.lag), Cell::num(r.log_likelihood, 6),
               r.lr_statistic ? Cell::num(*r.lr_statistic, 6) : Cell::blank(), Cell::num(r.fpe, -1),
               Cell::num(r.aic, 6), Cell::num(r.sc, 6), Cell::num(r.hq, 6), Cell::str(sel)});
    }
    return t;
}

inline Table johansen_table(int equation, const JohansenResult& j) {
    Table t;
    t.tag = equation > 0 ? "table_" + std::to_string(equation + 4) : "johansen";
    t.equation = equation;
    t.title = "Johansen cointegration test (" + std::string(to_string(j.det_case)) + ", " +
              std::to_string(j.lag_order - 1) + " lagged differences, T = " + std::to_string(j.t_eff) +
              "; trace rank " + std::to_string(j.selected_rank) + ", max-eigen rank " +
              std::to_string(j.maxeig_selected_rank) + ")";
    t.columns = {"Hypothesised CE(s)", "Eigenvalue", "Trace statistic", "Trace critical (5%)", "Trace reject",
                 "Max-eigen statistic", "Max-eigen critical (5%)", "Max-eigen reject"};
    for (Index r = 0; r < j.eigenvalues.size(); ++r) {
        t.add({Cell::str((r == 0 ? "r = 0" : "r <= " + std::to_string(r))), Cell::num(j.eigenvalues(r), 6),
               Cell::num(j.trace_stats(r), 5), Cell::num(j.trace_critical(r), 5),
               detail::yes_no(j.trace_stats(r) > j.trace_critical(r)), Cell::num(j.maxeig_stats(r), 5),
               Cell::num(j.maxeig_critical(r), 5), detail::yes_no(j.maxeig_stats(r) > j.maxeig_critical(r))});
    }
    return t;
}

inline std::string model_tag(int id) {
    switch (id) {
        case 1: return "table_9";
        case 2: return "table_8";
        case 3: return "table_10";
        default: return "model";
    }
}

inline Table vecm_table(int equation, const VecmFit& v, double level) {
    Table t;
    t.tag = model_tag(equation);
    t.equation = equation;
    t.title = "VECM estimates, D(" + v.roles[0] + ") equation (rank " + std::to_string(v.rank) + ", " +
              std::to_string(v.diff_lags()) + " lagged differences, T = " + std::to_string(v.fit.t_eff()) + ")";
    t.columns = {"Variable", "Coefficient", "Std. error", "t ratio", "P-value", "Significant"};
    const Vector b = v.fit.coefficients.col(0);
    const Vector se = v.fit.standard_errors(0);
    const Vector tr = v.fit.t_ratios(0);
    const Vector p = v.fit.p_values(0);
    for (Index i = 0; i < b.size(); ++i) {
        t.add({Cell::str(v.column_labels[static_cast<std::size_t>(i)]), Cell::num(b(i)), Cell::num(se(i)),
               Cell::num(tr(i), 3), Cell::num(p(i)), detail::yes_no(p(i) < level)});
    }
    for (Index j = 0; j < v.beta.cols(); ++j) {
        for (Index i = 0; i < v.beta.rows(); ++i) {
            const std::string name = i < v.num_vars() ? v.roles[static_cast<std::size_t>(i)] : "deterministic";
            t.add({Cell::str("beta" + std::to_string(j + 1) + "[" + name + "]"), Cell::num(v.beta(i, j)), Cell::blank(),
                   Cell::blank(), Cell::blank(), Cell::blank()});
        }
    }
    return t;
}

inline Table var_table(int equation, const VarFit& v) {
    Table t;
    t.tag = model_tag(equation);
    t.equation = equation;
    t.title = "VAR(" + std::to_string(v.lag_order) + ") coefficients (T = " + std::to_string(v.fit.t_eff()) + ")";
    t.columns = {"Regressor"};
    for (const auto& r : v.roles) {
        t.columns.push_back(r + " coef");
        t.columns.push_back(r + " SE");
        t.columns.push_back(r + " t");
    }
    const Index n = v.num_vars();
    std::vector<Vector> se, tr;
    for (Index e = 0; e < n; ++e) {
        se.push_back(v.fit.standard_errors(e));
        tr.push_back(v.fit.t_ratios(e));
    }
    for (Index i = 0; i < v.fit.num_regressors(); ++i) {
        std::vector<Cell> row{Cell::str(v.design.column_labels[static_cast<std::size_t>(i)])};
        for (Index e = 0; e < n; ++e) {
            const auto ue = static_cast<std::size_t>(e);
            row.push_back(Cell::num(v.fit.coefficients(i, e), -1));
            row.push_back(Cell::num(se[ue](i), -1));
            row.push_back(Cell::num(tr[ue](i), 3));
        }
        t.add(std::move(row));
    }
    return t;
}

inline Table causality_table(int equation, const std::vector<std::string>& roles,
                             const std::vector<CausalityEntry>& entries, bool vecm) {
    Table t;
    t.tag = equation > 0 ? "table_" + std::to_string(equation + 10) : "causality";
    t.equation = equation;
    t.title = vecm ? "VECM Granger causality (chi-square on lagged differences; ECT t-test)"
                   : "VAR Granger causality (chi-square on lag blocks)";
    t.columns = {"Dependent"};
    for (const auto& r : roles) {
        t.columns.push_back(r + " chi2");
        t.columns.push_back(r + " p");
    }
    t.columns.push_back("df");
    if (vecm) {
        t.columns.push_back("ECT coef");
        t.columns.push_back("ECT t");
        t.columns.push_back("ECT p");
    }
    for (const auto& effect : roles) {
        std::vector<Cell> row{Cell::str(effect)};
        double df = 0.0;
        const CausalityEntry* any = nullptr;
        for (const auto& cause : roles) {
            const CausalityEntry* c = nullptr;
            for (const auto& e : entries) {
                if (e.cause == cause && e.effect == effect) c = &e;
            }
            if (!c) {
                row.push_back(Cell::blank());
                row.push_back(Cell::blank());
                continue;
            }
            any = c;
            df = c->short_run.df1;
            row.push_back(Cell::num(c->short_run.statistic, 3));
            row.push_back(Cell::num(c->short_run.p_value));
        }
        row.push_back(Cell::num(df, 0));
        if (vecm) {
            if (any && any->long_run) {
                row.push_back(Cell::blank());
                row.push_back(Cell::num(any->long_run->statistic, 3));
                row.push_back(Cell::num(any->long_run->p_value));
            } else {
                row.insert(row.end(), 3, Cell::blank());
            }
        }
        t.add(std::move(row));
    }
    return t;
}

/// ECT coefficients need the fitted model; fill them after building the causality table.
inline void fill_ect_coefficients(Table& t, const VecmFit& v) {
    const std::size_t col = t.columns.size() - 3;
    for (std::size_t i = 0; i < t.rows.size() && static_cast<Index>(i) < v.num_vars(); ++i) {
        if (v.rank > 0) t.rows[i][col] = Cell::num(v.alpha(static_cast<Index>(i), 0), 4);
    }
}

inline Table diagnostics_table(int equation, const DiagnosticReport& d) {
    Table t;
    t.tag = "table_A2";
    t.equation = equation;
    t.title = "Regression diagnostics (" + d.model + ")";
    t.columns = {"Test", "Statistic", "df", "P-value", "Result"};
    for (const auto& bg : d.breusch_godfrey) {
        t.add({Cell::str(bg.name), Cell::num(bg.statistic), Cell::num(bg.df1, 0), detail::p_cell(bg.p_value),
               Cell::str(bg.reject ? "Autocorrelation" : "No autocorrelation")});
    }
    if (d.jarque_bera) {
        const auto& j = *d.jarque_bera;
        t.add({Cell::str("Jarque-Bera"), Cell::num(j.statistic), Cell::num(j.df1, 0), detail::p_cell(j.p_value),
               Cell::str(j.reject ? "Residuals not normal" : "Residuals are normally distributed")});
    }
    if (d.white) {
        const auto& w = d.white->test;
        t.add({Cell::str(w.name), Cell::num(w.statistic), Cell::num(w.df1, 0), detail::p_cell(w.p_value),
               Cell::str(w.reject ? "Heteroskedasticity" : "No heteroskedasticity")});
    } else {
        t.add({Cell::str("White"), Cell::blank(), Cell::blank(), Cell::blank(), Cell::str("not computed")});
    }
    if (d.reset) {
        for (const TestResult* r : {&d.reset->t, &d.reset->f, &d.reset->lr}) {
            t.add({Cell::str(r->name), Cell::num(r->statistic), Cell::num(r->df1, 0), detail::p_cell(r->p_value),
                   Cell::str(r->reject ? "Misspecified" : "Correctly specified")});
        }
    }
    for (const auto& v : d.vif) {
        t.add({Cell::str("VIF " + v.label + " (" + d.vif_basis + ")"), Cell::num(v.value, 2), Cell::blank(),
               Cell::blank(), Cell::str(v.infinite ? "Perfect collinearity" : (v.value < 10.0 ? "VIF < 10" : "VIF >= 10"))});
    }
    return t;
}

inline Table breaks_table(int equation, const BreakResult& b) {
    Table t;
    t.tag = "table_A3";
    t.equation = equation;
    std::string years;
    for (int y : b.break_years) years += (years.empty() ? "" : ", ") + std::to_string(y);
    t.title = "Sequential Bai-Perron tests (" + std::to_string(b.num_breaks) + " breaks" +
              (years.empty() ? "" : ": " + years) + ")";
    t.columns = {"Break test", "F statistic", "Critical value (5%)", "Reject"};
    for (std::size_t l = 0; l < b.f_statistics.size(); ++l) {
        t.add({Cell::str(std::to_string(l) + " vs. " + std::to_string(l + 1)), Cell::num(b.f_statistics[l], 2),
               Cell::num(b.critical_values[l], 2), detail::yes_no(b.f_statistics[l] > b.critical_values[l])});
    }
    return t;
}

inline Table errors_table(const AnalysisReport& rep) {
    Table t;
    t.tag = "errors";
    t.title = "Stage errors";
    t.columns = {"Equation", "Stage", "Kind", "Message"};
    auto add = [&](const StageError& e) {
        t.add({Cell::whole(e.equation), Cell::str(e.stage), Cell::str(std::string(to_string(e.kind))), Cell::str(e.message)});
    };
    for (const auto& e : rep.errors) add(e);
    for (const auto& eq : rep.equations) {
        for (const auto& e : eq.errors) add(e);
    }
    return t;
}

inline Table metadata_table(const AnalysisReport& rep) {
    Table t;
    t.tag = "metadata";
    t.title = "Run metadata";
    t.columns = {"Key", "Value"};
    for (const auto& [k, v] : rep.metadata) t.add({Cell::str(k), Cell::str(v)});
    for (const auto& c : rep.caveats) t.add({Cell::str("caveat"), Cell::str(c)});
    return t;
}

inline std::vector<Table> report_tables(const AnalysisReport& rep) {
    std::vector<Table> out;
    out.push_back(metadata_table(rep));
    out.push_back(perron_table(rep.unit_roots));
    out.push_back(adf_kpss_table(rep.unit_roots));
    for (const auto& eq : rep.equations) {
        const int id = eq.spec.id;
        if (eq.lag_selection) out.push_back(lag_selection_table(id, *eq.lag_selection));
        if (eq.johansen) out.push_back(johansen_table(id, *eq.johansen));
        if (eq.vecm) out.push_back(vecm_table(id, *eq.vecm, rep.config.level));
        if (eq.var) out.push_back(var_table(id, *eq.var));
        if (!eq.causality.empty()) {
            Table c = causality_table(id, eq.spec.roles(), eq.causality, eq.vecm.has_value());
            if (eq.vecm) fill_ect_coefficients(c, *eq.vecm);
            out.push_back(std::move(c));
        }
        if (eq.diagnostics) out.push_back(diagnostics_table(id, *eq.diagnostics));
        if (eq.breaks) out.push_back(breaks_table(id, *eq.breaks));
    }
    out.push_back(errors_table(rep));
    return out;
}

inline std::vector<std::filesystem::path> render_report(const AnalysisReport& rep, const std::string& dir,
                                                        ReportFormat f) {
    return write_tables(report_tables(rep), dir, f);
}

/// Plot-ready levels of every variable, one row per year.
inline Table series_table(const Dataset& d) {
    Table t;
    t.tag = "series";
    t.title = "Series levels";
    t.columns = {"year"};
    for (const auto& r : d.roles()) t.columns.push_back(r);
    for (std::size_t i = 0; i < d.num_obs(); ++i) {
        std::vector<Cell> row{Cell::whole(d.start_year() + static_cast<int>(i))};
        for (std::size_t v = 0; v < d.num_vars(); ++v) row.push_back(Cell::num(d[v][i], -1));
        t.add(std::move(row));
    }
    return t;
}

}  // namespace tsecon
