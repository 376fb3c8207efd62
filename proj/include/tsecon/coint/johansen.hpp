#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tsecon/core/design.hpp"
#include "tsecon/core/ols.hpp"
#include "tsecon/core/series.hpp"
#include "tsecon/critical_values.hpp"

namespace tsecon {

inline std::string_view to_string(JohansenCase c) noexcept {
    switch (c) {
        case JohansenCase::none: return "none";
        case JohansenCase::restricted_constant: return "restricted_constant";
        case JohansenCase::unrestricted_constant: return "unrestricted_constant";
        case JohansenCase::restricted_trend: return "restricted_trend";
        case JohansenCase::unrestricted_trend: return "unrestricted_trend";
    }
    return "?";
}

struct JohansenResult {
    std::vector<std::string> roles;
    JohansenCase det_case = JohansenCase::unrestricted_constant;
    int lag_order = 1;  // levels VAR order; the VECM carries lag_order - 1 differences
    Index t_eff = 0;
    Vector eigenvalues;  // descending, n entries
    Vector trace_stats;
    Vector maxeig_stats;
    Vector trace_critical;
    Vector maxeig_critical;
    int selected_rank = 0;         // trace test
    int maxeig_selected_rank = 0;  // reported alongside
    Matrix beta;   // m x n, columns are eigenvectors with v' S11 v = 1 (m = n or n + 1)
    Matrix alpha;  // n x n loadings S01 beta

    bool rank_tests_disagree() const noexcept { return selected_rank != maxeig_selected_rank; }
};

namespace detail {

struct JohansenMoments {
    Matrix R0, R1;  // concentrated differences and lagged levels
    Matrix Z1;      // lagged levels (with any restricted deterministic)
    Matrix dY;      // differences (targets)
    Matrix Z2;      // lagged differences then unrestricted deterministics
    Index t_eff = 0;
};

inline bool restricted_term(JohansenCase c) {
    return c == JohansenCase::restricted_constant || c == JohansenCase::restricted_trend;
}

inline int unrestricted_terms(JohansenCase c) {
    switch (c) {
        case JohansenCase::none:
        case JohansenCase::restricted_constant: return 0;
        case JohansenCase::unrestricted_constant:
        case JohansenCase::restricted_trend: return 1;
        case JohansenCase::unrestricted_trend: return 2;
    }
    return 0;
}

/// Rows are level indices t = p .. T-1. Lagged-difference columns are
/// variable-major, matching lag_matrix.
inline JohansenMoments johansen_moments(const Dataset& d, int p, JohansenCase c) {
    const Matrix Y = data_matrix(d, false);
    const Index T = Y.rows();
    const Index n = Y.cols();
    const Index rows = T - p;
    const int k = p - 1;
    const Index m = n + (restricted_term(c) ? 1 : 0);
    const Index z2cols = n * k + unrestricted_terms(c);
    if (rows <= z2cols + m) {
        throw Error(ErrorKind::degrees_of_freedom, "sample too short for Johansen with p=" + std::to_string(p));
    }
    JohansenMoments mo;
    mo.t_eff = rows;
    mo.dY.resize(rows, n);
    mo.Z1.resize(rows, m);
    mo.Z2.resize(rows, z2cols);
    for (Index r = 0; r < rows; ++r) {
        const Index t = p + r;
        mo.dY.row(r) = Y.row(t) - Y.row(t - 1);
        mo.Z1.row(r).head(n) = Y.row(t - 1);
        if (c == JohansenCase::restricted_constant) mo.Z1(r, n) = 1.0;
        if (c == JohansenCase::restricted_trend) mo.Z1(r, n) = static_cast<double>(t);
        for (Index v = 0; v < n; ++v) {
            for (int i = 1; i <= k; ++i) mo.Z2(r, v * k + (i - 1)) = Y(t - i, v) - Y(t - i - 1, v);
        }
        Index col = n * k;
        if (unrestricted_terms(c) >= 1) mo.Z2(r, col++) = 1.0;
        if (unrestricted_terms(c) >= 2) mo.Z2(r, col) = static_cast<double>(t + 1);
    }
    if (z2cols > 0) {
        const SystemFit f0 = system_ols(mo.dY, mo.Z2);
        const SystemFit f1 = system_ols(mo.Z1, mo.Z2);
        mo.R0 = f0.residuals;
        mo.R1 = f1.residuals;
    } else {
        mo.R0 = mo.dY;
        mo.R1 = mo.Z1;
    }
    return mo;
}

}  // namespace detail

/// Johansen reduced-rank (maximum-likelihood) cointegration test. `p` is
/// the order of the levels VAR; p - 1 lagged differences are concentrated out.
inline JohansenResult johansen_test(const Dataset& d, int p,
                                    JohansenCase det_case = JohansenCase::unrestricted_constant) {
    if (p < 1) throw Error(ErrorKind::parameter, "Johansen lag order must be at least 1");
    const Index n = static_cast<Index>(d.num_vars());
    const auto mo = detail::johansen_moments(d, p, det_case);
    const double T = static_cast<double>(mo.t_eff);
    const Matrix S00 = mo.R0.transpose() * mo.R0 / T;
    const Matrix S11 = mo.R1.transpose() * mo.R1 / T;
    const Matrix S01 = mo.R0.transpose() * mo.R1 / T;

    Eigen::LDLT<Matrix> s00(S00);
    if (s00.info() != Eigen::Success || !(s00.vectorD().minCoeff() > kRankTolerance * s00.vectorD().maxCoeff())) {
        throw Error(ErrorKind::singularity, "S00 is singular");
    }
    Matrix A = S01.transpose() * s00.solve(S01);
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(A, S11);
    if (ges.info() != Eigen::Success) throw Error(ErrorKind::singularity, "S11 is not positive definite");

    const Index m = S11.rows();
    JohansenResult res;
    res.roles = d.roles();
    res.det_case = det_case;
    res.lag_order = p;
    res.t_eff = mo.t_eff;
    res.eigenvalues.resize(n);
    res.beta.resize(m, n);
    for (Index i = 0; i < n; ++i) {
        const Index src = m - 1 - i;  // solver sorts ascending
        res.eigenvalues(i) = std::clamp(ges.eigenvalues()(src), 0.0, std::nextafter(1.0, 0.0));
        res.beta.col(i) = ges.eigenvectors().col(src);
    }
    res.alpha = S01 * res.beta;

    res.trace_stats.resize(n);
    res.maxeig_stats.resize(n);
    res.trace_critical.resize(n);
    res.maxeig_critical.resize(n);
    for (Index r = 0; r < n; ++r) {
        double tr = 0.0;
        for (Index i = r; i < n; ++i) tr -= T * std::log1p(-res.eigenvalues(i));
        res.trace_stats(r) = tr;
        res.maxeig_stats(r) = -T * std::log1p(-res.eigenvalues(r));
        res.trace_critical(r) = CriticalValueTable::johansen_trace_5pct(det_case, static_cast<int>(n - r));
        res.maxeig_critical(r) = CriticalValueTable::johansen_maxeig_5pct(det_case, static_cast<int>(n - r));
    }
    auto first_accept = [&](const Vector& stat, const Vector& cv) {
        for (Index r = 0; r < n; ++r) {
            if (stat(r) < cv(r)) return static_cast<int>(r);
        }
        return static_cast<int>(n);
    };
    res.selected_rank = first_accept(res.trace_stats, res.trace_critical);
    res.maxeig_selected_rank = first_accept(res.maxeig_stats, res.maxeig_critical);
    return res;
}

/// First r cointegrating vectors, each scaled so its first variable has coefficient 1.
inline Matrix cointegrating_vectors(const JohansenResult& res, int r) {
    if (r == 0) throw Error(ErrorKind::empty_result, "rank 0 has no cointegrating vectors");
    if (r < 0 || r > res.beta.cols()) throw Error(ErrorKind::parameter, "rank out of range");
    Matrix B = res.beta.leftCols(r);
    for (Index j = 0; j < r; ++j) {
        const double lead = B(0, j);
        if (std::abs(lead) <= 1e-12 * B.col(j).norm()) {
            throw Error(ErrorKind::normalization, "cointegrating vector " + std::to_string(j) +
                                                      " has a zero coefficient on '" + res.roles.at(0) + "'");
        }
        B.col(j) /= lead;
    }
    return B;
}

}  // namespace tsecon
