#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tsecon/core/design.hpp"
#include "tsecon/core/lrv.hpp"
#include "tsecon/core/ols.hpp"
#include "tsecon/core/series.hpp"
#include "tsecon/critical_values.hpp"

namespace tsecon {

enum class UnitRootTest { adf, kpss, perron };
enum class Decision { reject_null, fail_to_reject };
enum class PerronModel { intercept_break, trend_break, both };

inline std::string_view to_string(UnitRootTest t) noexcept {
    switch (t) {
        case UnitRootTest::adf: return "ADF";
        case UnitRootTest::kpss: return "KPSS";
        case UnitRootTest::perron: return "PERRON";
    }
    return "?";
}

inline std::string_view to_string(PerronModel m) noexcept {
    switch (m) {
        case PerronModel::intercept_break: return "intercept_break";
        case PerronModel::trend_break: return "trend_break";
        case PerronModel::both: return "both";
    }
    return "?";
}

struct UnitRootResult {
    UnitRootTest test_name = UnitRootTest::adf;
    Deterministic deterministic = Deterministic::intercept;
    double statistic = 0.0;
    double critical_value_1pct = 0.0;
    double critical_value_5pct = 0.0;
    double critical_value_10pct = 0.0;
    int lags_used = 0;
    std::optional<int> break_year;
    Decision decision = Decision::fail_to_reject;
    Index nobs = 0;

    bool rejects() const noexcept { return decision == Decision::reject_null; }
};

namespace detail {

inline Decision lower_tail_decision(double stat, double cv) {
    return stat < cv ? Decision::reject_null : Decision::fail_to_reject;
}

/// Dickey-Fuller design: rows are observation indices t in [first, T), the
/// target is y[t] - y[t-1], and the first regressor is y[t-1].
inline std::pair<Vector, Matrix> adf_design(std::span<const double> y, int lags, Deterministic det, Index first) {
    const Index T = static_cast<Index>(y.size());
    const Index rows = T - first;
    const Index k = 1 + lags + deterministic_count(det);
    Vector target(rows);
    Matrix X(rows, k);
    for (Index r = 0; r < rows; ++r) {
        const Index t = first + r;
        target(r) = y[t] - y[t - 1];
        X(r, 0) = y[t - 1];
        for (int i = 1; i <= lags; ++i) X(r, i) = y[t - i] - y[t - i - 1];
        Index c = 1 + lags;
        if (det != Deterministic::none) X(r, c++) = 1.0;
        if (det == Deterministic::intercept_trend) X(r, c) = static_cast<double>(t + 1);
    }
    return {std::move(target), std::move(X)};
}

inline double schwarz(const SystemFit& f) {
    const double n = static_cast<double>(f.t_eff());
    return std::log(f.ssr(0) / n) + static_cast<double>(f.num_regressors()) * std::log(n) / n;
}

}  // namespace detail

inline int adf_default_max_lags(std::size_t T) {
    return static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
}

/// Augmented Dickey-Fuller test; the augmentation lag minimizes the Schwarz
/// criterion over 0..max_lags on the common sample of the largest lag.
/// max_lags < 0 selects the default floor(12 (T/100)^(1/4)).
inline UnitRootResult adf_test(const Series& s, Deterministic det = Deterministic::intercept, int max_lags = -1) {
    const auto y = s.values();
    if (max_lags < 0) max_lags = adf_default_max_lags(y.size());
    if (y.size() < static_cast<std::size_t>(max_lags) + 10) {
        throw Error(ErrorKind::insufficient_data, "ADF on '" + s.name() + "' needs at least " +
                                                      std::to_string(max_lags + 10) + " observations");
    }
    int best = 0;
    double best_ic = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= max_lags; ++k) {
        auto [target, X] = detail::adf_design(y, k, det, max_lags + 1);
        const double ic = detail::schwarz(ols_fit(target, X));
        if (ic < best_ic) {
            best_ic = ic;
            best = k;
        }
    }
    auto [target, X] = detail::adf_design(y, best, det, best + 1);
    const SystemFit fit = ols_fit(target, X);

    UnitRootResult r;
    r.test_name = UnitRootTest::adf;
    r.deterministic = det;
    r.statistic = fit.t_ratios(0)(0);
    r.lags_used = best;
    r.nobs = fit.t_eff();
    const auto n = static_cast<std::size_t>(r.nobs);
    r.critical_value_1pct = adf_critical_value(det, Level::one_pct, n);
    r.critical_value_5pct = adf_critical_value(det, Level::five_pct, n);
    r.critical_value_10pct = adf_critical_value(det, Level::ten_pct, n);
    r.decision = detail::lower_tail_decision(r.statistic, r.critical_value_5pct);
    return r;
}

/// KPSS stationarity test with Newey-West bandwidth floor(4 (T/100)^(1/4)).
inline UnitRootResult kpss_test(const Series& s, Deterministic det = Deterministic::intercept) {
    if (det == Deterministic::none) throw Error(ErrorKind::parameter, "KPSS needs intercept or trend");
    const auto y = s.values();
    const Index T = static_cast<Index>(y.size());
    if (T < 20) throw Error(ErrorKind::insufficient_data, "KPSS needs at least 20 observations");
    Vector target(T);
    Matrix X(T, deterministic_count(det));
    for (Index t = 0; t < T; ++t) {
        target(t) = y[static_cast<std::size_t>(t)];
        X(t, 0) = 1.0;
        if (det == Deterministic::intercept_trend) X(t, 1) = static_cast<double>(t + 1);
    }
    const SystemFit fit = ols_fit(target, X);
    const Vector e = fit.residuals.col(0);
    const double scale = target.cwiseAbs().maxCoeff();
    if (e.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + scale)) {
        throw Error(ErrorKind::degenerate_input, "KPSS residuals of '" + s.name() + "' are identically zero");
    }
    const int bw = newey_west_bandwidth(static_cast<std::size_t>(T));
    const double lrv = newey_west_lrv(std::span<const double>(e.data(), static_cast<std::size_t>(T)), bw);
    if (!(lrv > 0.0)) throw Error(ErrorKind::degenerate_input, "zero long-run variance");
    double partial = 0.0;
    double sum_sq = 0.0;
    for (Index t = 0; t < T; ++t) {
        partial += e(t);
        sum_sq += partial * partial;
    }
    UnitRootResult r;
    r.test_name = UnitRootTest::kpss;
    r.deterministic = det;
    r.statistic = sum_sq / (static_cast<double>(T) * static_cast<double>(T) * lrv);
    r.lags_used = bw;
    r.nobs = T;
    r.critical_value_1pct = CriticalValueTable::kpss_value(det, Level::one_pct);
    r.critical_value_5pct = CriticalValueTable::kpss_value(det, Level::five_pct);
    r.critical_value_10pct = CriticalValueTable::kpss_value(det, Level::ten_pct);
    r.decision = r.statistic > r.critical_value_5pct ? Decision::reject_null : Decision::fail_to_reject;
    return r;
}

struct PerronOptions {
    PerronModel model = PerronModel::both;
    double trimming = 0.15;
    int max_lags = -1;                   // < 0: floor(12 (T/100)^(1/4))
    std::optional<int> fixed_lags;       // bypasses the general-to-specific lag search
    std::optional<std::pair<int, int>> break_years;  // restrict candidates to [first, last]
    double lag_t_threshold = 1.645;      // two-sided 10% for the last augmentation lag
};

namespace detail {

/// Innovational-outlier regression of dy_t on y_{t-1}, k lagged
/// differences, and constant, trend, DU, DT, D(Tb) as the model requires.
/// `tb` is the index of the last pre-break observation.
inline SystemFit perron_regression(std::span<const double> y, PerronModel model, Index tb, int k) {
    const Index T = static_cast<Index>(y.size());
    const Index first = k + 1;
    const Index rows = T - first;
    const bool du = model != PerronModel::trend_break;
    const bool dt = model != PerronModel::intercept_break;
    const bool pulse = model != PerronModel::trend_break;
    const Index cols = 1 + k + 2 + (du ? 1 : 0) + (dt ? 1 : 0) + (pulse ? 1 : 0);
    Vector target(rows);
    Matrix X(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Index t = first + r;
        target(r) = y[t] - y[t - 1];
        X(r, 0) = y[t - 1];
        for (int i = 1; i <= k; ++i) X(r, i) = y[t - i] - y[t - i - 1];
        Index c = 1 + k;
        X(r, c++) = 1.0;
        X(r, c++) = static_cast<double>(t + 1);
        if (du) X(r, c++) = t > tb ? 1.0 : 0.0;
        if (dt) X(r, c++) = t > tb ? static_cast<double>(t - tb) : 0.0;
        if (pulse) X(r, c++) = t == tb + 1 ? 1.0 : 0.0;
    }
    return ols_fit(target, X);
}

}  // namespace detail

/// t-ratio on the lagged level for a known break year and augmentation lag.
inline double perron_fixed_break_statistic(const Series& s, PerronModel model, int break_year, int lags) {
    const Index tb = break_year - s.start_year();
    if (tb < 1 || tb >= static_cast<Index>(s.size()) - 1 || lags < 0 || lags > tb - 1) {
        throw Error(ErrorKind::parameter, "break year or lag order infeasible");
    }
    return detail::perron_regression(s.values(), model, tb, lags).t_ratios(0)(0);
}

/// Unit-root test allowing one endogenous break: the statistic is the
/// minimum lagged-level t-ratio over admissible break dates.
inline UnitRootResult perron_test(const Series& s, const PerronOptions& opt = {}) {
    const auto y = s.values();
    const Index T = static_cast<Index>(y.size());
    if (T < 25) throw Error(ErrorKind::insufficient_data, "break unit-root test needs at least 25 observations");
    if (!(opt.trimming > 0.0 && opt.trimming <= 0.25)) {
        throw Error(ErrorKind::parameter, "trimming must lie in (0, 0.25]");
    }
    const int kmax = opt.max_lags < 0 ? adf_default_max_lags(y.size()) : opt.max_lags;
    const Index h = static_cast<Index>(std::ceil(opt.trimming * static_cast<double>(T)));
    Index lo = std::max<Index>(h - 1, 1);
    Index hi = T - h - 1;
    if (opt.break_years) {
        lo = std::max<Index>(lo, opt.break_years->first - s.start_year());
        hi = std::min<Index>(hi, opt.break_years->second - s.start_year());
    }

    double best_stat = std::numeric_limits<double>::infinity();
    Index best_tb = -1;
    int best_k = 0;
    for (Index tb = lo; tb <= hi; ++tb) {
        const int kcap = static_cast<int>(std::min<Index>(kmax, tb - 1));
        try {
            int k = 0;
            if (opt.fixed_lags) {
                k = *opt.fixed_lags;
                if (k > kcap) continue;
            } else {
                for (int cand = kcap; cand >= 1; --cand) {
                    const SystemFit f = detail::perron_regression(y, opt.model, tb, cand);
                    if (std::abs(f.t_ratios(0)(cand)) > opt.lag_t_threshold) {
                        k = cand;
                        break;
                    }
                }
            }
            const double stat = detail::perron_regression(y, opt.model, tb, k).t_ratios(0)(0);
            if (stat < best_stat) {
                best_stat = stat;
                best_tb = tb;
                best_k = k;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::singularity && e.kind() != ErrorKind::degrees_of_freedom) throw;
        }
    }
    if (best_tb < 0) throw Error(ErrorKind::parameter, "no feasible break date in the trimmed window");

    UnitRootResult r;
    r.test_name = UnitRootTest::perron;
    r.deterministic = Deterministic::intercept_trend;
    r.statistic = best_stat;
    r.lags_used = best_k;
    r.break_year = s.start_year() + static_cast<int>(best_tb);
    r.nobs = T - best_k - 1;
    r.critical_value_1pct = CriticalValueTable::perron_value(Level::one_pct);
    r.critical_value_5pct = CriticalValueTable::perron_value(Level::five_pct);
    r.critical_value_10pct = CriticalValueTable::perron_value(Level::ten_pct);
    r.decision = detail::lower_tail_decision(r.statistic, r.critical_value_5pct);
    return r;
}

enum class IntegrationOrder { I0, I1, inconclusive };

inline std::string_view to_string(IntegrationOrder o) noexcept {
    switch (o) {
        case IntegrationOrder::I0: return "I(0)";
        case IntegrationOrder::I1: return "I(1)";
        case IntegrationOrder::inconclusive: return "inconclusive";
    }
    return "?";
}

struct IntegrationVerdict {
    IntegrationOrder order = IntegrationOrder::inconclusive;
    UnitRootResult adf_level;
    UnitRootResult adf_diff;
    std::optional<UnitRootResult> kpss_level;
    std::optional<UnitRootResult> kpss_diff;
    bool kpss_agrees = true;
};

/// ADF-based order of integration with KPSS as corroboration.
inline IntegrationVerdict integration_order(const Series& s, Deterministic det = Deterministic::intercept) {
    if (s.size() < 25) throw Error(ErrorKind::insufficient_data, "integration order needs at least 25 observations");
    IntegrationVerdict v;
    const Series d = diff(s, 1);
    v.adf_level = adf_test(s, det);
    v.adf_diff = adf_test(d, det);
    if (v.adf_level.rejects()) {
        v.order = IntegrationOrder::I0;
    } else if (v.adf_diff.rejects()) {
        v.order = IntegrationOrder::I1;
    } else {
        v.order = IntegrationOrder::inconclusive;
    }
    try {
        v.kpss_level = kpss_test(s, det);
        v.kpss_diff = kpss_test(d, det);
        if (v.order == IntegrationOrder::I0) {
            v.kpss_agrees = !v.kpss_level->rejects();
        } else if (v.order == IntegrationOrder::I1) {
            v.kpss_agrees = v.kpss_level->rejects() && !v.kpss_diff->rejects();
        } else {
            v.kpss_agrees = v.kpss_diff->rejects();
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate_input) throw;
        v.kpss_agrees = false;
    }
    return v;
}

}  // namespace tsecon
