#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsecon/coint/johansen.hpp"

namespace tsecon {

/// Vector error-correction model with r cointegrating relations.
/// Regressor layout per equation: lagged differences (variable-major,
/// p - 1 per variable), then the r error-correction terms, then the
/// unrestricted deterministics.
struct VecmFit {
    int rank = 0;
    int lag_order = 2;  // levels order p; p - 1 lagged differences
    JohansenCase det_case = JohansenCase::unrestricted_constant;
    std::vector<std::string> roles;
    std::vector<std::string> column_labels;
    Matrix beta;        // m x r, first row normalized to 1
    Matrix alpha;       // n x r adjustment coefficients
    Matrix ect_series;  // t_eff x r, beta' y_{t-1} (with any restricted deterministic)
    Matrix lagged_levels;  // t_eff x m, the y_{t-1} block used for the ECT
    SystemFit fit;
    int first_year = 0;

    int diff_lags() const noexcept { return lag_order - 1; }
    Index num_vars() const noexcept { return static_cast<Index>(roles.size()); }

    Index role_index(const std::string& role) const {
        for (std::size_t i = 0; i < roles.size(); ++i) {
            if (roles[i] == role) return static_cast<Index>(i);
        }
        throw Error(ErrorKind::parameter, "role '" + role + "' not in VECM");
    }

    std::vector<Index> short_run_block(Index variable) const {
        std::vector<Index> idx;
        for (int i = 0; i < diff_lags(); ++i) idx.push_back(variable * diff_lags() + i);
        return idx;
    }

    Index ect_index(Index j) const { return num_vars() * diff_lags() + j; }

    Vector t_ratios(Index eq) const { return fit.t_ratios(eq); }
    Vector p_values(Index eq) const { return fit.p_values(eq); }
};

inline VecmFit vecm_fit(const Dataset& d, int p, int r, JohansenCase det_case = JohansenCase::unrestricted_constant) {
    if (p < 2) throw Error(ErrorKind::parameter, "VECM needs p >= 2 so that at least one lagged difference exists");
    const Index n = static_cast<Index>(d.num_vars());
    if (r < 0 || r > n) throw Error(ErrorKind::parameter, "cointegrating rank out of range");
    const auto mo = detail::johansen_moments(d, p, det_case);

    VecmFit v;
    v.rank = r;
    v.lag_order = p;
    v.det_case = det_case;
    v.roles = d.roles();
    v.first_year = d.start_year() + p;
    v.lagged_levels = mo.Z1;
    const int k = p - 1;
    const Index ndet = detail::unrestricted_terms(det_case);
    Matrix X(mo.t_eff, n * k + r + ndet);
    X.leftCols(n * k) = mo.Z2.leftCols(n * k);
    for (Index var = 0; var < n; ++var) {
        for (int i = 1; i <= k; ++i) v.column_labels.push_back("D(" + v.roles[static_cast<std::size_t>(var)] + ")(-" + std::to_string(i) + ")");
    }
    if (r > 0) {
        const JohansenResult jr = johansen_test(d, p, det_case);
        v.beta = cointegrating_vectors(jr, r);
        v.ect_series = mo.Z1 * v.beta;
        X.middleCols(n * k, r) = v.ect_series;
        for (int j = 0; j < r; ++j) v.column_labels.push_back("ECT" + std::to_string(j + 1) + "(-1)");
    } else {
        v.beta.resize(mo.Z1.cols(), 0);
        v.ect_series.resize(mo.t_eff, 0);
    }
    if (ndet > 0) {
        X.rightCols(ndet) = mo.Z2.rightCols(ndet);
        v.column_labels.push_back("C");
        if (ndet > 1) v.column_labels.push_back("@TREND");
    }
    v.fit = system_ols(mo.dY, X);
    v.alpha = r > 0 ? Matrix(v.fit.coefficients.middleRows(n * k, r).transpose()) : Matrix(n, 0);
    return v;
}

struct VecmCausality {
    TestResult short_run;
    std::optional<TestResult> long_run;  // absent when rank is 0
};

/// Short-run Wald test on lagged differences of `cause` in the `effect`
/// equation, and t-test on the first error-correction term there.
inline VecmCausality vecm_granger(const VecmFit& v, const std::string& cause, const std::string& effect,
                                  double level = 0.05) {
    const Index c = v.role_index(cause);
    const Index e = v.role_index(effect);
    VecmCausality out;
    out.short_run = wald_block_test(v.fit, e, v.short_run_block(c), level, "D(" + cause + ") -> D(" + effect + ")");
    if (v.rank > 0) {
        const Index idx = v.ect_index(0);
        const double t = v.fit.t_ratios(e)(idx);
        out.long_run = make_t_result("ECT(-1) in D(" + effect + ")", t, static_cast<double>(v.fit.dof()), level);
    }
    return out;
}

}  // namespace tsecon
