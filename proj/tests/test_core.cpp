#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "tsecon/core/design.hpp"
#include "tsecon/core/lrv.hpp"
#include "tsecon/core/ols.hpp"
#include "tsecon/core/series.hpp"

using namespace tsecon;

namespace {

// Normal equations solved by Gaussian elimination with partial pivoting in
// long double. Shares nothing with the QR path under test.
std::vector<double> normal_equations_oracle(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
    const std::size_t T = X.size(), k = X[0].size();
    std::vector<std::vector<long double>> A(k, std::vector<long double>(k + 1, 0.0L));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t t = 0; t < T; ++t) A[i][j] += static_cast<long double>(X[t][i]) * X[t][j];
        }
        for (std::size_t t = 0; t < T; ++t) A[i][k] += static_cast<long double>(X[t][i]) * y[t];
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r) {
            if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
        }
        std::swap(A[c], A[piv]);
        for (std::size_t r = c + 1; r < k; ++r) {
            const long double f = A[r][c] / A[c][c];
            for (std::size_t j = c; j <= k; ++j) A[r][j] -= f * A[c][j];
        }
    }
    std::vector<long double> b(k);
    for (std::size_t i = k; i-- > 0;) {
        long double s = A[i][k];
        for (std::size_t j = i + 1; j < k; ++j) s -= A[i][j] * b[j];
        b[i] = s / A[i][i];
    }
    return {b.begin(), b.end()};
}

Series make(std::vector<double> v, int start = 2000) { return Series("x", start, std::move(v)); }

}  // namespace

TEST(Series, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(make({}), Error);
    try {
        make({1.0, std::nan(""), 2.0}, 1990);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
        EXPECT_NE(std::string(e.what()).find("1991"), std::string::npos);
    }
}

TEST(Diff, FirstDifference) {
    const Series d = diff(make({15.4, 20.0, 26.0}, 1980));
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d[0], 4.6, 1e-12);
    EXPECT_NEAR(d[1], 6.0, 1e-12);
    EXPECT_EQ(d.start_year(), 1981);
}

TEST(Diff, ConstantSeriesGivesZeros) {
    const Series d = diff(make({3, 3, 3, 3}));
    EXPECT_EQ(d.size(), 3u);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], 0.0);
}

TEST(Diff, FortyPointsGiveThirtyNineFrom1981) {
    std::vector<double> v(40);
    for (int i = 0; i < 40; ++i) v[static_cast<std::size_t>(i)] = i * i;
    const Series d = diff(make(v, 1980));
    EXPECT_EQ(d.size(), 39u);
    EXPECT_EQ(d.start_year(), 1981);
    EXPECT_EQ(d.end_year(), 2019);
}

TEST(Diff, SecondOrderAndTooLong) {
    const Series d2 = diff(make({1, 4, 9, 16}), 2);
    EXPECT_EQ(d2.size(), 2u);
    EXPECT_DOUBLE_EQ(d2[0], 2.0);
    EXPECT_DOUBLE_EQ(d2[1], 2.0);
    try {
        diff(make({1, 2, 3}), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
    }
}

TEST(Diff, CumulateInvertsDiff) {
    const Series s = make({2.0, 3.5, -1.0, 4.25, 0.5});
    const Series back = cumulate(diff(s), s[0]);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(back[i], s[i], 1e-12);
}

TEST(NaturalLog, Values) {
    const Series a = natural_log(make({1, 1, 1}));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i], 0.0);
    EXPECT_NEAR(natural_log(make({std::numbers::e}))[0], 1.0, 1e-15);
}

TEST(NaturalLog, NamesOffendingYear) {
    try {
        natural_log(make({1.0, 2.0, 0.0}, 1980));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
        EXPECT_NE(std::string(e.what()).find("1982"), std::string::npos);
    }
}

TEST(Align, Intersection) {
    std::vector<double> a(40, 1.0), b(39, 2.0);
    const Dataset d = align({Series("A", 1980, a), Series("B", 1981, b)});
    EXPECT_EQ(d.start_year(), 1981);
    EXPECT_EQ(d.end_year(), 2019);
    EXPECT_EQ(d.roles(), (std::vector<std::string>{"A", "B"}));
}

TEST(Align, IdenticalRangesUnchanged) {
    const Dataset d = align({Series("A", 1980, {1, 2, 3}), Series("B", 1980, {4, 5, 6})});
    EXPECT_EQ(d.num_obs(), 3u);
    EXPECT_EQ(d.get("B")[2], 6.0);
}

TEST(Align, DisjointRangesFail) {
    try {
        align({Series("A", 1980, std::vector<double>(11, 1.0)), Series("B", 2000, std::vector<double>(20, 1.0))});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::alignment);
    }
}

TEST(Dataset, DuplicateRolesRejected) {
    EXPECT_THROW(Dataset({Series("A", 1, {1, 2}), Series("A", 1, {3, 4})}), Error);
}

TEST(LagMatrix, CountsAndLayout) {
    const Dataset one({Series("y", 1, {1, 2, 3, 4, 5})});
    const DesignMatrix dm = lag_matrix(one, 1, Deterministic::intercept);
    EXPECT_EQ(dm.regressors.rows(), 4);
    EXPECT_EQ(dm.regressors.cols(), 2);
    EXPECT_EQ(dm.t_eff, 4);
    EXPECT_EQ(dm.regressors(0, 0), 1.0);
    EXPECT_EQ(dm.targets(0, 0), 2.0);
    EXPECT_EQ(dm.regressors(0, 1), 1.0);
}

TEST(LagMatrix, FourVariablesFiveLags) {
    std::vector<Series> v;
    std::mt19937_64 g(1);
    std::normal_distribution<double> N;
    for (const char* r : {"A", "B", "C", "D"}) {
        std::vector<double> x(40);
        for (auto& e : x) e = N(g);
        v.emplace_back(r, 1980, x);
    }
    const DesignMatrix dm = lag_matrix(Dataset(v), 5, Deterministic::intercept);
    EXPECT_EQ(dm.regressors.cols(), 21);
    EXPECT_EQ(dm.t_eff, 35);
    EXPECT_EQ(dm.column_labels.back(), "C");
    // Variable-major: B's third lag sits at 1*5 + 2.
    EXPECT_EQ(dm.regressors(0, 7), Dataset(v).get("B")[2]);
}

TEST(LagMatrix, ZeroLagIsInterceptOnly) {
    const Dataset one({Series("y", 1, {1, 2, 3})});
    const DesignMatrix dm = lag_matrix(one, 0, Deterministic::intercept);
    EXPECT_EQ(dm.regressors.cols(), 1);
    EXPECT_TRUE((dm.regressors.array() == 1.0).all());
}

TEST(LagMatrix, TooShortIsDegreesOfFreedomError) {
    const Dataset one({Series("y", 1, {1, 2, 3})});
    try {
        lag_matrix(one, 2, Deterministic::intercept_trend);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degrees_of_freedom);
    }
}

TEST(LagMatrix, DifferencedTargets) {
    const Dataset one({Series("y", 1, {1, 2, 4, 8, 16, 32})});
    const DesignMatrix dm = lag_matrix(one, 1, Deterministic::intercept, true);
    EXPECT_EQ(dm.t_eff, 4);
    EXPECT_EQ(dm.targets(0, 0), 2.0);     // 4 - 2
    EXPECT_EQ(dm.regressors(0, 0), 1.0);  // 2 - 1
}

TEST(Ols, InterceptOnlyGivesMean) {
    const SystemFit f = ols_fit(Vector::LinSpaced(3, 1, 3), Matrix::Ones(3, 1));
    EXPECT_NEAR(f.coefficients(0, 0), 2.0, 1e-14);
}

TEST(Ols, PerfectFit) {
    Matrix X(5, 1);
    X << 1, 2, 3, 4, 5;
    const SystemFit f = ols_fit(2.0 * Vector(X.col(0)), X);
    EXPECT_NEAR(f.coefficients(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(f.r_squared(0), 1.0, 1e-14);
    EXPECT_LT(f.residuals.cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Ols, MatchesNormalEquationsOracle) {
    std::mt19937_64 g(42);
    std::normal_distribution<double> N;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::vector<double>> Xv(40, std::vector<double>(3));
        std::vector<double> yv(40);
        Matrix X(40, 3);
        Vector y(40);
        for (int t = 0; t < 40; ++t) {
            for (int j = 0; j < 3; ++j) X(t, j) = Xv[t][j] = (j == 0 ? 1.0 : N(g) * (j == 2 ? 100.0 : 1.0));
            y(t) = yv[t] = 1.0 + 0.5 * X(t, 1) - 0.01 * X(t, 2) + N(g);
        }
        const auto b = normal_equations_oracle(Xv, yv);
        const SystemFit f = ols_fit(y, X);
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(f.coefficients(j, 0), b[j], 1e-8 * std::max(1.0, std::abs(b[j])));
        }
    }
}

TEST(Ols, ResidualsOrthogonalToRegressors) {
    std::mt19937_64 g(3);
    std::normal_distribution<double> N;
    Matrix X(50, 4);
    for (Index i = 0; i < X.size(); ++i) X.data()[i] = N(g);
    Vector y(50);
    for (auto& v : y) v = N(g);
    const SystemFit f = ols_fit(y, X);
    const double scale = X.norm() * y.norm();
    EXPECT_LT((X.transpose() * f.residuals).cwiseAbs().maxCoeff(), 1e-8 * scale);
}

TEST(Ols, RankDeficientNamesColumns) {
    Matrix X(10, 3);
    for (int t = 0; t < 10; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = t;
        X(t, 2) = 2.0 * t + 1.0;
    }
    try {
        ols_fit(Vector::Ones(10), X);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singularity);
        EXPECT_NE(std::string(e.what()).find("dependent column"), std::string::npos);
    }
}

TEST(Ols, TooFewObservations) {
    try {
        ols_fit(Vector::Ones(2), Matrix::Random(2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degrees_of_freedom);
    }
}

TEST(SystemOls, DuplicateColumnsGiveIdenticalCoefficients) {
    std::mt19937_64 g(5);
    std::normal_distribution<double> N;
    Matrix X(30, 3), Y(30, 2);
    for (Index i = 0; i < X.size(); ++i) X.data()[i] = N(g);
    for (Index t = 0; t < 30; ++t) Y(t, 0) = Y(t, 1) = N(g);
    const SystemFit f = system_ols(Y, X);
    EXPECT_EQ((f.coefficients.col(0) - f.coefficients.col(1)).cwiseAbs().maxCoeff(), 0.0);
    const SystemFit single = ols_fit(Y.col(0), X);
    EXPECT_LT((single.coefficients.col(0) - f.coefficients.col(0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SystemOls, LogLikelihoodMatchesDirectFormula) {
    std::mt19937_64 g(9);
    std::normal_distribution<double> N;
    const Index T = 60, n = 3;
    Matrix X(T, 2), Y(T, n);
    for (Index t = 0; t < T; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = N(g);
        for (Index j = 0; j < n; ++j) Y(t, j) = 0.3 * j + X(t, 1) * (j - 1) + N(g);
    }
    const SystemFit f = system_ols(Y, X);
    // Direct evaluation: -(Tn/2)(1 + ln 2pi) - (T/2) ln det(Sigma), det by cofactor expansion.
    const Matrix& S = f.resid_cov;
    const double det = S(0, 0) * (S(1, 1) * S(2, 2) - S(1, 2) * S(2, 1)) - S(0, 1) * (S(1, 0) * S(2, 2) - S(1, 2) * S(2, 0)) +
                       S(0, 2) * (S(1, 0) * S(2, 1) - S(1, 1) * S(2, 0));
    const double expected = -(static_cast<double>(T * n) / 2.0) * (1.0 + std::log(2.0 * std::numbers::pi)) -
                            (static_cast<double>(T) / 2.0) * std::log(det);
    EXPECT_NEAR(f.log_likelihood, expected, 1e-9 * std::abs(expected));
}

TEST(SystemOls, OrthogonalResidualsGiveDiagonalCovariance) {
    // Residual columns supported on disjoint rows are exactly orthogonal.
    const Index T = 8;
    Matrix X = Matrix::Ones(T, 1);
    Matrix Y = Matrix::Zero(T, 2);
    Y(0, 0) = 1;
    Y(1, 0) = -1;
    Y(2, 1) = 1;
    Y(3, 1) = -1;
    const SystemFit f = system_ols(Y, X);
    EXPECT_NEAR(f.resid_cov(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(f.resid_cov(0, 0), 2.0 / T, 1e-15);
}

TEST(Wald, ZeroBlockGivesZeroStatistic) {
    SystemFit f;
    f.coefficients = Matrix::Zero(3, 1);
    f.coefficients(0, 0) = 2.0;
    f.coefficient_cov = {Matrix::Identity(3, 3)};
    const TestResult r = wald_block_test(f, 0, {2});
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0);
    EXPECT_EQ(r.df1, 1.0);
}

TEST(Wald, EmptyBlockAndSingularBlock) {
    SystemFit f;
    f.coefficients = Matrix::Ones(2, 1);
    f.coefficient_cov = {Matrix::Zero(2, 2)};
    try {
        wald_block_test(f, 0, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_restriction);
    }
    try {
        wald_block_test(f, 0, {0, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singularity);
    }
}

TEST(Wald, SingleCoefficientEqualsSquaredT) {
    std::mt19937_64 g(8);
    std::normal_distribution<double> N;
    Matrix X(40, 2);
    Vector y(40);
    for (Index t = 0; t < 40; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = N(g);
        y(t) = 0.2 * X(t, 1) + N(g);
    }
    const SystemFit f = ols_fit(y, X);
    const double tr = f.t_ratios(0)(1);
    EXPECT_NEAR(wald_block_test(f, 0, {1}).statistic, tr * tr, 1e-10);
}

TEST(NeweyWest, BandwidthZeroIsVariance) {
    const std::vector<double> u{1.0, -2.0, 3.0, 0.5, -1.5};
    double m = 0.0;
    for (double x : u) m += x;
    m /= 5.0;
    double v = 0.0;
    for (double x : u) v += (x - m) * (x - m);
    EXPECT_NEAR(newey_west_lrv(u, 0), v / 5.0, 1e-14);
}

TEST(NeweyWest, ZerosAndBandwidthErrors) {
    const std::vector<double> z(10, 0.0);
    EXPECT_EQ(newey_west_lrv(z, 3), 0.0);
    try {
        newey_west_lrv(z, 10);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parameter);
    }
}

TEST(NeweyWest, BartlettWeightsByHand) {
    const std::vector<double> u{1.0, 2.0, -1.0, 0.0};  // mean 0.5
    std::vector<double> d;
    for (double x : u) d.push_back(x - 0.5);
    auto gamma = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t t = j; t < d.size(); ++t) s += d[t] * d[t - j];
        return s / 4.0;
    };
    const double expected = gamma(0) + 2.0 * (2.0 / 3.0 * gamma(1) + 1.0 / 3.0 * gamma(2));
    EXPECT_NEAR(newey_west_lrv(u, 2), std::max(0.0, expected), 1e-14);
}

TEST(NeweyWest, Ar1ApproachesLongRunVariance) {
    std::mt19937_64 g(11);
    std::normal_distribution<double> N;
    const double phi = 0.5;
    std::vector<double> u(100000);
    double x = 0.0;
    for (auto& v : u) v = x = phi * x + N(g);
    const double gamma0 = 1.0 / (1.0 - phi * phi);
    const double target = gamma0 * (1.0 + phi) / (1.0 - phi);  // 4
    const double small = newey_west_lrv(u, 5);
    const double large = newey_west_lrv(u, 200);
    EXPECT_LT(std::abs(large - target), std::abs(small - target));
    EXPECT_NEAR(large, target, 0.1 * target);
}

TEST(NaturalLog, HandCheckedValues) {
    const Series s = natural_log(Series("GDPPC", 1980, {266.58, 1357.56, 2100.75}));
    EXPECT_NEAR(s[0], 5.585674, 1e-6);
    EXPECT_NEAR(s[1], 7.213444, 1e-6);
    EXPECT_NEAR(s[2], 7.650050, 1e-6);
}

TEST(Ols, RSquaredBounds) {
    std::mt19937_64 g(12);
    std::normal_distribution<double> N;
    Vector y(25);
    for (auto& v : y) v = N(g);
    EXPECT_NEAR(ols_fit(y, Matrix::Ones(25, 1)).r_squared(0), 0.0, 1e-14);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix X(25, 3);
        X.col(0).setOnes();
        for (Index t = 0; t < 25; ++t) X(t, 1) = N(g), X(t, 2) = N(g);
        const double r2 = ols_fit(y, X).r_squared(0);
        EXPECT_GE(r2, 0.0);
        EXPECT_LE(r2, 1.0);
    }
}

TEST(SystemOls, LogLikelihoodInvariantToColumnOrder) {
    std::mt19937_64 g(13);
    std::normal_distribution<double> N;
    Matrix X(40, 2), Y(40, 3);
    for (Index t = 0; t < 40; ++t) {
        X(t, 0) = 1.0;
        X(t, 1) = N(g);
        for (Index j = 0; j < 3; ++j) Y(t, j) = N(g) + 0.5 * j * X(t, 1);
    }
    Matrix P(40, 3);
    P.col(0) = Y.col(2);
    P.col(1) = Y.col(0);
    P.col(2) = Y.col(1);
    EXPECT_NEAR(system_ols(Y, X).log_likelihood, system_ols(P, X).log_likelihood, 1e-9);
}

TEST(Wald, InvariantToBlockRescaling) {
    std::mt19937_64 g(14);
    std::normal_distribution<double> N;
    Matrix X(60, 4);
    Vector y(60);
    for (Index t = 0; t < 60; ++t) {
        X(t, 0) = 1.0;
        for (Index j = 1; j < 4; ++j) X(t, j) = N(g);
        y(t) = 0.2 * X(t, 1) - 0.1 * X(t, 2) + N(g);
    }
    const double base = wald_block_test(ols_fit(y, X), 0, {1, 2}).statistic;
    Matrix Xs = X;
    // Nonsingular mixing within the tested block.
    Xs.col(1) = 3.0 * X.col(1) + X.col(2);
    Xs.col(2) = -0.5 * X.col(2);
    EXPECT_NEAR(wald_block_test(ols_fit(y, Xs), 0, {1, 2}).statistic, base, 1e-9 * std::max(1.0, base));
}

TEST(Wald, SizeUnderZeroBlock) {
    std::mt19937_64 g(15);
    std::normal_distribution<double> N;
    const int reps = 2000;
    int rejections = 0;
    for (int r = 0; r < reps; ++r) {
        Matrix X(500, 4);
        Vector y(500);
        for (Index t = 0; t < 500; ++t) {
            X(t, 0) = 1.0;
            for (Index j = 1; j < 4; ++j) X(t, j) = N(g);
            y(t) = 1.0 + 0.5 * X(t, 1) + N(g);
        }
        rejections += wald_block_test(ols_fit(y, X), 0, {2, 3}).reject;
    }
    EXPECT_NEAR(static_cast<double>(rejections) / reps, 0.05, 0.02);
}
