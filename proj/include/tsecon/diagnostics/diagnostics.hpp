#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsecon/core/ols.hpp"

namespace tsecon {

/// Breusch-Godfrey LM test for serial correlation up to `lags`, with
/// pre-sample residuals set to zero so the auxiliary sample equals T.
inline TestResult breusch_godfrey(const SystemFit& fit, int lags, Index equation = 0, double level = 0.05) {
    const Index T = fit.t_eff();
    if (lags < 1) throw Error(ErrorKind::parameter, "Breusch-Godfrey needs at least one lag");
    if (lags >= T) throw Error(ErrorKind::parameter, "Breusch-Godfrey lag order must be below the sample size");
    const Vector u = fit.residuals.col(equation);
    const Index k = fit.num_regressors();
    Matrix X(T, k + lags);
    X.leftCols(k) = fit.regressors;
    for (int j = 1; j <= lags; ++j) {
        for (Index t = 0; t < T; ++t) X(t, k + j - 1) = t >= j ? u(t - j) : 0.0;
    }
    const SystemFit aux = ols_fit(u, X);
    const double stat = static_cast<double>(T) * aux.r_squared(0);
    return make_chi2_result("Breusch-Godfrey LM(" + std::to_string(lags) + ")", stat, lags, level);
}

/// Jarque-Bera normality test with divisor-T moments.
inline TestResult jarque_bera(std::span<const double> u, double level = 0.05) {
    const auto T = u.size();
    if (T < 8) throw Error(ErrorKind::insufficient_data, "Jarque-Bera needs at least 8 observations");
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= static_cast<double>(T);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : u) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(T);
    m3 /= static_cast<double>(T);
    m4 /= static_cast<double>(T);
    double scale = 0.0;
    for (double x : u) scale = std::max(scale, std::abs(x));
    if (!(m2 > 1e-24 * (1.0 + scale * scale))) throw Error(ErrorKind::degenerate_input, "zero-variance sample");
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    const double stat = static_cast<double>(T) / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
    return make_chi2_result("Jarque-Bera", stat, 2.0, level);
}

inline TestResult jarque_bera(const Vector& u, double level = 0.05) {
    return jarque_bera(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())), level);
}

struct WhiteResult {
    TestResult test;
    bool cross_terms = false;
    Index aux_regressors = 0;  // including the constant
};

/// White heteroskedasticity test. cross_terms = nullopt picks cross
/// products only when there are at most five non-constant regressors.
inline WhiteResult white_test(const SystemFit& fit, std::optional<bool> cross_terms = std::nullopt,
                              Index equation = 0, double level = 0.05) {
    const Index T = fit.t_eff();
    std::vector<Vector> base;
    for (Index j = 0; j < fit.num_regressors(); ++j) {
        const Vector c = fit.regressors.col(j);
        if (!detail::is_constant_column(c)) base.push_back(c);
    }
    const bool cross = cross_terms.value_or(base.size() <= 5);
    std::vector<Vector> cols{Vector::Ones(T)};
    auto push_unique = [&](const Vector& c) {
        for (const auto& e : cols) {
            if ((e - c).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + c.cwiseAbs().maxCoeff())) return;
        }
        cols.push_back(c);
    };
    for (const auto& c : base) push_unique(c);
    for (std::size_t a = 0; a < base.size(); ++a) {
        push_unique(base[a].cwiseProduct(base[a]));
        if (cross) {
            for (std::size_t b = a + 1; b < base.size(); ++b) push_unique(base[a].cwiseProduct(base[b]));
        }
    }
    const Index m = static_cast<Index>(cols.size());
    if (m >= T) {
        throw Error(ErrorKind::parameter, "White test needs " + std::to_string(m) + " auxiliary regressors but only " +
                                              std::to_string(T) + " observations");
    }
    Matrix X(T, m);
    for (Index j = 0; j < m; ++j) X.col(j) = cols[static_cast<std::size_t>(j)];
    const Vector u2 = fit.residuals.col(equation).array().square().matrix();
    const SystemFit aux = ols_fit(u2, X);
    WhiteResult w;
    w.cross_terms = cross;
    w.aux_regressors = m;
    w.test = make_chi2_result(cross ? "White (cross terms)" : "White (no cross terms)",
                              static_cast<double>(T) * aux.r_squared(0), static_cast<double>(m - 1), level);
    return w;
}

struct ResetResult {
    TestResult t;   // on the squared fitted value
    TestResult f;   // all added powers
    TestResult lr;  // likelihood ratio, all added powers
    int max_power = 2;
};

/// Ramsey RESET: augment with fitted-value powers 2..max_power.
inline ResetResult ramsey_reset(const SystemFit& fit, int max_power = 2, Index equation = 0, double level = 0.05) {
    if (max_power < 2) throw Error(ErrorKind::parameter, "RESET needs max_power >= 2");
    const Index T = fit.t_eff();
    const Index k = fit.num_regressors();
    const Index m = max_power - 1;
    const Vector yhat = fit.fitted(equation);
    const double sd = std::sqrt((yhat.array() - yhat.mean()).square().mean());
    const double s = sd > 0.0 ? sd : 1.0;
    Matrix X(T, k + m);
    X.leftCols(k) = fit.regressors;
    for (Index j = 0; j < m; ++j) X.col(k + j) = (yhat / s).array().pow(static_cast<double>(j + 2)).matrix();
    const SystemFit aug = ols_fit(fit.targets.col(equation), X);
    const double ssr_r = fit.ssr(equation);
    const double ssr_u = aug.ssr(0);
    const double df2 = static_cast<double>(T - k - m);
    ResetResult out;
    out.max_power = max_power;
    out.t = make_t_result("RESET t", aug.t_ratios(0)(k), df2, level);
    out.f = make_f_result("RESET F", ((ssr_r - ssr_u) / static_cast<double>(m)) / (ssr_u / df2),
                          static_cast<double>(m), df2, level);
    out.lr = make_chi2_result("RESET LR", static_cast<double>(T) * std::log(ssr_r / ssr_u), static_cast<double>(m),
                              level);
    return out;
}

struct VifEntry {
    std::string label;
    double value = 1.0;
    bool infinite = false;
};

/// Variance inflation factors of each column regressed on the others plus an intercept.
inline std::vector<VifEntry> vif(const Matrix& X, const std::vector<std::string>& labels) {
    const Index T = X.rows();
    const Index m = X.cols();
    if (m < 2) throw Error(ErrorKind::parameter, "VIF needs at least two regressors");
    if (static_cast<Index>(labels.size()) != m) throw Error(ErrorKind::parameter, "one label per column required");
    if (T <= m) throw Error(ErrorKind::degrees_of_freedom, "VIF needs more rows than columns");
    std::vector<VifEntry> out;
    for (Index j = 0; j < m; ++j) {
        Matrix Z(T, m);
        Z.col(0).setOnes();
        Index c = 1;
        for (Index i = 0; i < m; ++i) {
            if (i != j) Z.col(c++) = X.col(i);
        }
        VifEntry e;
        e.label = labels[static_cast<std::size_t>(j)];
        const Vector x = X.col(j);
        const double tss = (x.array() - x.mean()).square().sum();
        Eigen::ColPivHouseholderQR<Matrix> qr(Z);
        qr.setThreshold(1e-10);
        const Vector resid = x - Z * qr.solve(x);
        // A constant column is collinear with the intercept.
        const double tol = tss > 0.0 ? resid.squaredNorm() / tss : 0.0;
        if (tol <= 1e-12) {
            e.infinite = true;
            e.value = std::numeric_limits<double>::infinity();
        } else {
            e.value = 1.0 / tol;
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace tsecon
