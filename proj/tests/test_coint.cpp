#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "tsecon/coint/johansen.hpp"
#include "tsecon/coint/vecm.hpp"

using namespace tsecon;

namespace {

Dataset cointegrated(std::uint64_t seed, int T, int extra_walks = 0) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> N;
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(2 + extra_walks), std::vector<double>(static_cast<std::size_t>(T)));
    double x = 0.0, z = 0.0;
    std::vector<double> w(static_cast<std::size_t>(extra_walks), 0.0);
    for (int t = 0; t < T; ++t) {
        x += 0.1 + N(g);
        z = 0.5 * z + N(g);
        cols[0][static_cast<std::size_t>(t)] = x;
        cols[1][static_cast<std::size_t>(t)] = x + z;
        for (int j = 0; j < extra_walks; ++j) cols[static_cast<std::size_t>(2 + j)][static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(j)] += N(g);
    }
    std::vector<Series> s;
    for (std::size_t j = 0; j < cols.size(); ++j) s.emplace_back("y" + std::to_string(j + 1), 1, cols[j]);
    return Dataset(s);
}

Dataset stationary(std::uint64_t seed, int T) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> N;
    std::vector<double> a(static_cast<std::size_t>(T)), b(static_cast<std::size_t>(T));
    double x = 0, y = 0;
    for (int t = 0; t < T; ++t) {
        const double nx = 0.4 * x + 0.1 * y + N(g);
        y = 0.2 * x + 0.3 * y + N(g);
        x = nx;
        a[static_cast<std::size_t>(t)] = x;
        b[static_cast<std::size_t>(t)] = y;
    }
    return Dataset({Series("a", 1, a), Series("b", 1, b)});
}

Dataset known_vecm(std::mt19937_64& g, int T, double alpha) {
    std::normal_distribution<double> N;
    std::vector<double> a(static_cast<std::size_t>(T)), b(static_cast<std::size_t>(T));
    double y1 = 0.0, y2 = 0.0;
    for (int t = 0; t < T; ++t) {
        const double ect = y1 - y2;
        y1 += alpha * ect + N(g);
        y2 += N(g);
        a[static_cast<std::size_t>(t)] = y1;
        b[static_cast<std::size_t>(t)] = y2;
    }
    return Dataset({Series("y1", 1, a), Series("y2", 1, b)});
}

Dataset rescaled(const Dataset& d, const std::vector<double>& c) {
    std::vector<Series> out;
    for (std::size_t j = 0; j < d.num_vars(); ++j) {
        std::vector<double> v(d[j].values().begin(), d[j].values().end());
        for (auto& x : v) x *= c[j];
        out.emplace_back(d[j].name(), d[j].start_year(), v);
    }
    return Dataset(out);
}

}  // namespace

TEST(Johansen, EigenvaluesAndStatisticShape) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const JohansenResult j = johansen_test(cointegrated(seed, 120, 2), 2);
        ASSERT_EQ(j.eigenvalues.size(), 4);
        for (Index i = 0; i < 4; ++i) {
            EXPECT_GE(j.eigenvalues(i), 0.0);
            EXPECT_LT(j.eigenvalues(i), 1.0);
            EXPECT_GE(j.trace_stats(i), 0.0);
            EXPECT_GE(j.maxeig_stats(i), 0.0);
            if (i > 0) {
                EXPECT_LE(j.eigenvalues(i), j.eigenvalues(i - 1));
                EXPECT_LE(j.trace_stats(i), j.trace_stats(i - 1));
            }
        }
    }
}

TEST(Johansen, TelescopingIdentity) {
    const JohansenResult j = johansen_test(cointegrated(6, 150, 2), 3);
    for (Index r = 0; r + 1 < j.trace_stats.size(); ++r) {
        EXPECT_NEAR(j.trace_stats(r) - j.trace_stats(r + 1), j.maxeig_stats(r), 1e-6);
    }
    EXPECT_NEAR(j.trace_stats(3), j.maxeig_stats(3), 1e-12);
}

TEST(Johansen, SelectedRankIsFirstTraceAcceptance) {
    const JohansenResult j = johansen_test(cointegrated(7, 200, 1), 2);
    int expected = static_cast<int>(j.trace_stats.size());
    for (Index r = 0; r < j.trace_stats.size(); ++r) {
        if (j.trace_stats(r) < j.trace_critical(r)) {
            expected = static_cast<int>(r);
            break;
        }
    }
    EXPECT_EQ(j.selected_rank, expected);
    EXPECT_EQ(j.trace_critical(0), 29.79707);
    EXPECT_EQ(j.maxeig_critical(0), 21.13162);
}

TEST(Johansen, DefaultCaseCriticalValues) {
    const Vector expected_trace = (Vector(4) << 47.85613, 29.79707, 15.49471, 3.841466).finished();
    const Vector expected_max = (Vector(4) << 27.58434, 21.13162, 14.26460, 3.841466).finished();
    const JohansenResult j = johansen_test(cointegrated(8, 100, 2), 2);
    for (Index r = 0; r < 4; ++r) {
        EXPECT_EQ(j.trace_critical(r), expected_trace(r));
        EXPECT_EQ(j.maxeig_critical(r), expected_max(r));
    }
}

TEST(Johansen, RankOneRecovery) {
    const JohansenResult j = johansen_test(cointegrated(9, 400), 2);
    EXPECT_EQ(j.selected_rank, 1);
    const Matrix b = cointegrating_vectors(j, 1);
    EXPECT_EQ(b(0, 0), 1.0);
    EXPECT_NEAR(b(1, 0), -1.0, 0.05);
}

TEST(Johansen, InvariantToPositiveRescaling) {
    const Dataset d = cointegrated(10, 150, 1);
    const JohansenResult a = johansen_test(d, 2);
    const JohansenResult b = johansen_test(rescaled(d, {3.0, 0.01, 250.0}), 2);
    EXPECT_EQ(a.selected_rank, b.selected_rank);
    for (Index r = 0; r < 3; ++r) {
        EXPECT_NEAR(a.trace_stats(r), b.trace_stats(r), 1e-6);
        EXPECT_NEAR(a.maxeig_stats(r), b.maxeig_stats(r), 1e-6);
    }
}

TEST(Johansen, AllCasesRun) {
    const Dataset d = cointegrated(11, 150);
    for (JohansenCase c : {JohansenCase::none, JohansenCase::restricted_constant, JohansenCase::unrestricted_constant,
                           JohansenCase::restricted_trend, JohansenCase::unrestricted_trend}) {
        const JohansenResult j = johansen_test(d, 2, c);
        EXPECT_EQ(j.det_case, c);
        EXPECT_EQ(j.beta.rows(), detail::restricted_term(c) ? 3 : 2);
        for (Index i = 0; i < 2; ++i) EXPECT_LT(j.eigenvalues(i), 1.0);
    }
}

TEST(Johansen, Errors) {
    const Dataset d = cointegrated(12, 60);
    try {
        johansen_test(d, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parameter);
    }
    const Dataset dup({d[0], d[0].renamed("copy")});
    try {
        johansen_test(dup, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::singularity);
    }
    try {
        johansen_test(d.slice(1, 6), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degrees_of_freedom);
    }
}

TEST(CointegratingVectors, NormalizedAndFullRank) {
    const JohansenResult j = johansen_test(stationary(13, 300), 2);
    EXPECT_EQ(j.selected_rank, 2);
    const Matrix b = cointegrating_vectors(j, 2);
    EXPECT_EQ(b(0, 0), 1.0);
    EXPECT_EQ(b(0, 1), 1.0);
    // Two normalized vectors of a full-rank system still span the plane.
    EXPECT_GT(std::abs(b.determinant()), 1e-6);
}

TEST(CointegratingVectors, Errors) {
    const JohansenResult j = johansen_test(cointegrated(14, 100), 2);
    try {
        cointegrating_vectors(j, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::empty_result);
    }
    EXPECT_THROW(cointegrating_vectors(j, 3), Error);
    JohansenResult bad = j;
    bad.beta(0, 0) = 0.0;
    try {
        cointegrating_vectors(bad, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::normalization);
    }
}

TEST(Vecm, RankZeroEqualsDifferencedVar) {
    const Dataset d = cointegrated(15, 120, 1);
    for (int p : {2, 3, 4}) {
        const VecmFit v = vecm_fit(d, p, 0);
        const SystemFit var = system_ols(lag_matrix(d, p - 1, Deterministic::intercept, true));
        ASSERT_EQ(v.fit.coefficients.rows(), var.coefficients.rows());
        ASSERT_EQ(v.fit.t_eff(), var.t_eff());
        EXPECT_LT((v.fit.coefficients - var.coefficients).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((v.fit.residuals - var.residuals).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Vecm, EctSeriesReproducesFromBetaAndData) {
    const Dataset d = cointegrated(16, 100, 1);
    const int p = 3;
    const VecmFit v = vecm_fit(d, p, 1);
    ASSERT_EQ(v.ect_series.cols(), 1);
    EXPECT_EQ(v.beta(0, 0), 1.0);
    for (Index r = 0; r < v.ect_series.rows(); ++r) {
        const std::size_t t = static_cast<std::size_t>(p + r - 1);  // y_{t-1}
        double e = 0.0;
        for (std::size_t j = 0; j < d.num_vars(); ++j) e += v.beta(static_cast<Index>(j), 0) * d[j][t];
        EXPECT_NEAR(v.ect_series(r, 0), e, 1e-10 * (1.0 + std::abs(e)));
    }
}

TEST(Vecm, ResidualsOrthogonalToEct) {
    const VecmFit v = vecm_fit(cointegrated(17, 200, 1), 2, 1);
    const Vector ect = v.ect_series.col(0);
    for (Index eq = 0; eq < v.fit.num_equations(); ++eq) {
        const double scale = ect.norm() * v.fit.residuals.col(eq).norm();
        EXPECT_LT(std::abs(ect.dot(v.fit.residuals.col(eq))), 1e-8 * scale);
    }
}

TEST(Vecm, LayoutAndBlocks) {
    const VecmFit v = vecm_fit(cointegrated(18, 120, 2), 4, 2);
    EXPECT_EQ(v.diff_lags(), 3);
    EXPECT_EQ(v.fit.num_regressors(), 4 * 3 + 2 + 1);
    EXPECT_EQ(v.short_run_block(1), (std::vector<Index>{3, 4, 5}));
    EXPECT_EQ(v.ect_index(0), 12);
    EXPECT_EQ(v.column_labels[12], "ECT1(-1)");
    EXPECT_EQ(v.column_labels.back(), "C");
    EXPECT_EQ(v.alpha.rows(), 4);
    EXPECT_EQ(v.alpha.cols(), 2);
    EXPECT_EQ(v.alpha(2, 1), v.fit.coefficients(13, 2));
}

TEST(Vecm, Errors) {
    const Dataset d = cointegrated(19, 80);
    EXPECT_THROW(vecm_fit(d, 1, 1), Error);
    EXPECT_THROW(vecm_fit(d, 2, 3), Error);
    EXPECT_THROW(vecm_fit(d, 2, -1), Error);
}

TEST(Vecm, RecoversNegativeAdjustment) {
    std::mt19937_64 g(20);
    const int reps = 500;
    int negative = 0;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const VecmFit v = vecm_fit(known_vecm(g, 200, -0.3), 2, 1);
        const double a = v.alpha(0, 0);
        negative += a < 0.0;
        sum += a;
        sum_sq += a * a;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt(sum_sq / reps - mean * mean);
    EXPECT_GE(negative, static_cast<int>(0.95 * reps));
    // Recovered mean inside a generous band around the truth (small-sample bias included).
    EXPECT_NEAR(mean, -0.3, 3.0 * sd / std::sqrt(static_cast<double>(reps)) + 0.03);
}

TEST(VecmGranger, ShortAndLongRun) {
    const VecmFit v = vecm_fit(cointegrated(21, 200, 1), 3, 1);
    const VecmCausality c = vecm_granger(v, "y2", "y1");
    EXPECT_EQ(c.short_run.df1, 2.0);
    ASSERT_TRUE(c.long_run.has_value());
    EXPECT_EQ(c.long_run->distribution, Distribution::student_t);
    EXPECT_NEAR(c.long_run->statistic, v.t_ratios(0)(v.ect_index(0)), 1e-14);
    EXPECT_DOUBLE_EQ(c.long_run->df1, static_cast<double>(v.fit.dof()));

    const VecmCausality none = vecm_granger(vecm_fit(cointegrated(21, 200, 1), 3, 0), "y2", "y1");
    EXPECT_FALSE(none.long_run.has_value());
    EXPECT_THROW(vecm_granger(v, "nope", "y1"), Error);
}
