#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tsecon/core/design.hpp"
#include "tsecon/core/ols.hpp"
#include "tsecon/core/series.hpp"
#include "tsecon/critical_values.hpp"

namespace tsecon {

/// Levels VAR(p) estimated equation by equation on common regressors.
struct VarFit {
    int lag_order = 0;
    Deterministic det = Deterministic::intercept;
    std::vector<std::string> roles;
    DesignMatrix design;
    SystemFit fit;

    Index num_vars() const noexcept { return static_cast<Index>(roles.size()); }

    Index role_index(const std::string& role) const {
        for (std::size_t i = 0; i < roles.size(); ++i) {
            if (roles[i] == role) return static_cast<Index>(i);
        }
        throw Error(ErrorKind::parameter, "role '" + role + "' not in VAR");
    }

    /// Coefficient of `variable` at lag `lag` (1-based) in `equation`.
    double coefficient(Index equation, Index variable, int lag) const {
        return fit.coefficients(variable * lag_order + (lag - 1), equation);
    }

    Vector intercepts() const {
        const Index c = num_vars() * lag_order;
        if (det == Deterministic::none) return Vector::Zero(num_vars());
        return fit.coefficients.row(c).transpose();
    }

    Vector standard_errors(Index eq) const { return fit.standard_errors(eq); }
    Vector t_ratios(Index eq) const { return fit.t_ratios(eq); }
};

inline VarFit var_fit(const Dataset& d, int p, Deterministic det = Deterministic::intercept, int presample = 0) {
    VarFit v;
    v.lag_order = p;
    v.det = det;
    v.roles = d.roles();
    v.design = lag_matrix(d, p, det, false, presample);
    v.fit = system_ols(v.design);
    return v;
}

/// Wald test that every lag of `cause` is zero in the `effect` equation.
inline TestResult var_granger(const VarFit& v, const std::string& cause, const std::string& effect,
                              double level = 0.05) {
    if (v.lag_order < 1) throw Error(ErrorKind::invalid_restriction, "VAR(0) has no lags to test");
    const Index c = v.role_index(cause);
    const Index e = v.role_index(effect);
    return wald_block_test(v.fit, e, v.design.lag_block(c), level, cause + " -> " + effect);
}

/// Companion-matrix eigenvalue moduli, sorted descending.
inline std::vector<double> stability(const VarFit& v) {
    const Index n = v.num_vars();
    const int p = v.lag_order;
    if (p == 0) return {};
    const Index np = n * p;
    Matrix C = Matrix::Zero(np, np);
    for (int lag = 1; lag <= p; ++lag) {
        for (Index eq = 0; eq < n; ++eq) {
            for (Index var = 0; var < n; ++var) C(eq, (lag - 1) * n + var) = v.coefficient(eq, var, lag);
        }
    }
    if (p > 1) C.bottomLeftCorner(np - n, np - n).setIdentity();
    Eigen::EigenSolver<Matrix> es(C, false);
    std::vector<double> mod;
    for (Index i = 0; i < np; ++i) mod.push_back(std::abs(es.eigenvalues()(i)));
    std::sort(mod.begin(), mod.end(), std::greater<>());
    return mod;
}

inline bool is_stable(const VarFit& v) {
    const auto m = stability(v);
    return m.empty() || m.front() < 1.0;
}

struct LagSelectionRow {
    int lag = 0;
    double log_likelihood = 0.0;
    std::optional<double> lr_statistic;
    double fpe = 0.0;
    double aic = 0.0;
    double sc = 0.0;
    double hq = 0.0;
};

struct LagSelectionTable {
    std::vector<LagSelectionRow> rows;
    Index t_eff = 0;
    int num_vars = 0;
    int lr_selected = 0;
    int fpe_selected = 0;
    int aic_selected = 0;
    int sc_selected = 0;
    int hq_selected = 0;
};

/// Per-observation information criteria from a system log-likelihood with
/// `params` estimated coefficients in total.
struct InformationCriteria {
    double aic, sc, hq;
};

inline InformationCriteria information_criteria(double loglik, double params, double T) {
    return {(-2.0 * loglik + 2.0 * params) / T, (-2.0 * loglik + params * std::log(T)) / T,
            (-2.0 * loglik + 2.0 * params * std::log(std::log(T))) / T};
}

/// Sims small-sample-corrected likelihood ratio, k_star regressors per equation
/// in the larger model.
inline double modified_lr(double loglik_delta, double T, double k_star) {
    return ((T - k_star) / T) * 2.0 * loglik_delta;
}

inline double final_prediction_error(double det_sigma, double T, double k_star, int n) {
    return det_sigma * std::pow((T + k_star) / (T - k_star), n);
}

/// Lag-order table for lags 0..max_p, all estimated on the sample available at max_p.
inline LagSelectionTable lag_order_select(const Dataset& d, int max_p, Deterministic det = Deterministic::intercept,
                                          double level = 0.05) {
    if (max_p < 1) throw Error(ErrorKind::parameter, "maximum lag must be at least 1");
    LagSelectionTable tab;
    const int n = static_cast<int>(d.num_vars());
    tab.num_vars = n;
    for (int p = 0; p <= max_p; ++p) {
        const DesignMatrix dm = lag_matrix(d, p, det, false, max_p);
        const SystemFit f = system_ols(dm);
        const double T = static_cast<double>(dm.t_eff);
        tab.t_eff = dm.t_eff;
        const double k_star = static_cast<double>(n * p + deterministic_count(det));
        LagSelectionRow row;
        row.lag = p;
        row.log_likelihood = f.log_likelihood;
        const auto ic = information_criteria(f.log_likelihood, k_star * n, T);
        row.aic = ic.aic;
        row.sc = ic.sc;
        row.hq = ic.hq;
        row.fpe = final_prediction_error(f.resid_cov.determinant(), T, k_star, n);
        if (p > 0) row.lr_statistic = modified_lr(f.log_likelihood - tab.rows.back().log_likelihood, T, k_star);
        tab.rows.push_back(row);
    }
    auto argmin = [&](auto proj) {
        int best = 0;
        for (const auto& r : tab.rows) {
            if (proj(r) < proj(tab.rows[static_cast<std::size_t>(best)])) best = r.lag;
        }
        return best;
    };
    tab.fpe_selected = argmin([](const LagSelectionRow& r) { return r.fpe; });
    tab.aic_selected = argmin([](const LagSelectionRow& r) { return r.aic; });
    tab.sc_selected = argmin([](const LagSelectionRow& r) { return r.sc; });
    tab.hq_selected = argmin([](const LagSelectionRow& r) { return r.hq; });
    // Sequential LR from the longest lag down: first significant lag.
    const double crit = chi2_quantile(1.0 - level, static_cast<double>(n * n));
    tab.lr_selected = 0;
    for (int p = max_p; p >= 1; --p) {
        if (*tab.rows[static_cast<std::size_t>(p)].lr_statistic > crit) {
            tab.lr_selected = p;
            break;
        }
    }
    return tab;
}

}  // namespace tsecon
