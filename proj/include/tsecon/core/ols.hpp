#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsecon/core/distributions.hpp"
#include "tsecon/error.hpp"

namespace tsecon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative singular-value threshold below which a design is declared rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// Multivariate least-squares fit with a common regressor matrix. A
/// single-equation OLS fit is the n = 1 case.
struct SystemFit {
    Matrix coefficients;  // k x n
    Matrix residuals;     // T x n
    Matrix resid_cov;     // n x n, divisor T
    double log_likelihood = 0.0;
    Vector ssr;                          // per equation
    std::vector<Matrix> coefficient_cov;  // per equation, divisor T - k
    Vector r_squared;
    Matrix xtx_inv;  // (X'X)^-1
    Matrix regressors;
    Matrix targets;
    bool has_intercept = false;

    Index t_eff() const noexcept { return residuals.rows(); }
    Index num_regressors() const noexcept { return coefficients.rows(); }
    Index num_equations() const noexcept { return coefficients.cols(); }
    Index dof() const noexcept { return t_eff() - num_regressors(); }

    Vector standard_errors(Index eq) const { return coefficient_cov.at(eq).diagonal().cwiseSqrt(); }

    Vector t_ratios(Index eq) const {
        Vector se = standard_errors(eq);
        Vector t(se.size());
        for (Index i = 0; i < se.size(); ++i) t(i) = se(i) > 0.0 ? coefficients(i, eq) / se(i) : 0.0;
        return t;
    }

    Vector p_values(Index eq) const {
        Vector t = t_ratios(eq);
        Vector p(t.size());
        for (Index i = 0; i < t.size(); ++i) p(i) = t_two_sided(t(i), static_cast<double>(dof()));
        return p;
    }

    Vector fitted(Index eq) const { return targets.col(eq) - residuals.col(eq); }
};

namespace detail {

inline bool is_constant_column(const Eigen::Ref<const Vector>& c) {
    if (c.size() == 0 || c(0) == 0.0) return false;
    return (c.array() == c(0)).all();
}

inline double gaussian_loglik(const Matrix& resid_cov, Index t_eff) {
    const double n = static_cast<double>(resid_cov.rows());
    const double T = static_cast<double>(t_eff);
    Eigen::LDLT<Matrix> ldlt(resid_cov);
    double logdet = 0.0;
    for (Index i = 0; i < ldlt.vectorD().size(); ++i) {
        const double d = ldlt.vectorD()(i);
        if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
        logdet += std::log(d);
    }
    return -(T * n / 2.0) * (1.0 + std::log(2.0 * std::numbers::pi)) - (T / 2.0) * logdet;
}

}  // namespace detail

/// Gaussian system log-likelihood evaluated from an MLE residual covariance.
inline double gaussian_log_likelihood(const Matrix& resid_cov, Index t_eff) {
    return detail::gaussian_loglik(resid_cov, t_eff);
}

/// Least squares of every column of Y on the common regressors X.
inline SystemFit system_ols(const Matrix& Y, const Matrix& X) {
    const Index T = X.rows();
    const Index k = X.cols();
    if (Y.rows() != T) throw Error(ErrorKind::parameter, "targets and regressors have different row counts");
    if (k == 0) throw Error(ErrorKind::parameter, "regression needs at least one regressor");
    if (T <= k) {
        throw Error(ErrorKind::degrees_of_freedom,
                    std::to_string(T) + " observations for " + std::to_string(k) + " regressors");
    }

    // Column equilibration makes the rank test invariant to units.
    Vector scale(k);
    for (Index j = 0; j < k; ++j) {
        scale(j) = X.col(j).norm();
        if (scale(j) == 0.0) {
            throw Error(ErrorKind::singularity, "regressor column " + std::to_string(j) + " is identically zero");
        }
    }
    const Matrix Xs = X * scale.cwiseInverse().asDiagonal();

    Eigen::JacobiSVD<Matrix> svd(Xs);
    const Vector& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= kRankTolerance * sv(0)) {
        Eigen::ColPivHouseholderQR<Matrix> cpqr(Xs);
        cpqr.setThreshold(kRankTolerance);
        std::string cols;
        for (Index i = cpqr.rank(); i < k; ++i) {
            if (!cols.empty()) cols += ", ";
            cols += std::to_string(cpqr.colsPermutation().indices()(i));
        }
        throw Error(ErrorKind::singularity, "rank-deficient regressor matrix; dependent column(s): " + cols);
    }

    Eigen::HouseholderQR<Matrix> qr(Xs);
    const Matrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const Matrix Rinv = R.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));

    SystemFit fit;
    fit.coefficients = scale.cwiseInverse().asDiagonal() * qr.solve(Y);
    fit.residuals = Y - X * fit.coefficients;
    fit.xtx_inv = scale.cwiseInverse().asDiagonal() * (Rinv * Rinv.transpose()) * scale.cwiseInverse().asDiagonal();
    fit.regressors = X;
    fit.targets = Y;

    const Index n = Y.cols();
    fit.resid_cov = (fit.residuals.transpose() * fit.residuals) / static_cast<double>(T);
    fit.resid_cov = 0.5 * (fit.resid_cov + fit.resid_cov.transpose()).eval();
    fit.ssr = fit.residuals.colwise().squaredNorm().transpose();
    fit.log_likelihood = detail::gaussian_loglik(fit.resid_cov, T);

    for (Index j = 0; j < k; ++j) {
        if (detail::is_constant_column(X.col(j))) fit.has_intercept = true;
    }
    fit.r_squared.resize(n);
    fit.coefficient_cov.reserve(static_cast<std::size_t>(n));
    for (Index e = 0; e < n; ++e) {
        const double s2 = fit.ssr(e) / static_cast<double>(T - k);
        fit.coefficient_cov.push_back(s2 * fit.xtx_inv);
        const double tss = fit.has_intercept ? (Y.col(e).array() - Y.col(e).mean()).square().sum()
                                             : Y.col(e).squaredNorm();
        double r2 = tss > 0.0 ? 1.0 - fit.ssr(e) / tss : (fit.ssr(e) == 0.0 ? 1.0 : 0.0);
        if (fit.has_intercept) r2 = std::clamp(r2, 0.0, 1.0);
        fit.r_squared(e) = r2;
    }
    return fit;
}

inline SystemFit ols_fit(const Vector& y, const Matrix& X) {
    return system_ols(Matrix(y), X);
}

/// Wald chi-square test that a block of coefficients in one equation is zero.
inline TestResult wald_block_test(const SystemFit& fit, Index equation, const std::vector<Index>& indices,
                                  double level = 0.05, std::string name = "Wald") {
    if (indices.empty()) throw Error(ErrorKind::invalid_restriction, "empty coefficient block");
    if (equation < 0 || equation >= fit.num_equations()) {
        throw Error(ErrorKind::parameter, "equation index out of range");
    }
    const Index m = static_cast<Index>(indices.size());
    Vector b(m);
    Matrix V(m, m);
    for (Index i = 0; i < m; ++i) {
        const Index ci = indices[static_cast<std::size_t>(i)];
        if (ci < 0 || ci >= fit.num_regressors()) {
            throw Error(ErrorKind::invalid_restriction, "coefficient index " + std::to_string(ci) + " out of range");
        }
        b(i) = fit.coefficients(ci, equation);
        for (Index j = 0; j < m; ++j) {
            V(i, j) = fit.coefficient_cov[static_cast<std::size_t>(equation)](ci, indices[static_cast<std::size_t>(j)]);
        }
    }
    Eigen::LDLT<Matrix> ldlt(V);
    const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > kRankTolerance * dmax)) {
        throw Error(ErrorKind::singularity, "coefficient covariance block is singular");
    }
    const double stat = b.dot(ldlt.solve(b));
    return make_chi2_result(std::move(name), stat, static_cast<double>(m), level);
}

}  // namespace tsecon
