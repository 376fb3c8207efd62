#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "tsecon/breaks/bai_perron.hpp"

using namespace tsecon;

namespace {

double direct_ssr(const BreakModel& m, Index a, Index b) {
    const Matrix X = m.X.middleRows(a, b - a + 1);
    const Vector y = m.y.segment(a, b - a + 1);
    const Vector beta = X.colPivHouseholderQr().solve(y);
    return (y - X * beta).squaredNorm();
}

// Brute force over every admissible set of k break ends.
Partition exhaustive(const BreakModel& m, int k) {
    const Index T = m.nobs(), h = m.min_segment();
    Partition best;
    best.ssr = std::numeric_limits<double>::infinity();
    std::vector<Index> ends;
    std::function<void(Index, int, double)> rec = [&](Index start, int left, double acc) {
        if (left == 0) {
            if (T - start < h) return;
            const double total = acc + direct_ssr(m, start, T - 1);
            if (total < best.ssr) {
                best.ssr = total;
                best.ends = ends;
            }
            return;
        }
        for (Index e = start + h - 1; e + 1 + static_cast<Index>(left) * h <= T; ++e) {
            ends.push_back(e);
            rec(e + 1, left - 1, acc + direct_ssr(m, start, e));
            ends.pop_back();
        }
    };
    rec(0, k, 0.0);
    return best;
}

BreakModel random_model(std::mt19937_64& g, Index T, Index q, double trimming) {
    std::normal_distribution<double> N;
    BreakModel m;
    m.trimming = trimming;
    m.X.resize(T, q);
    m.y.resize(T);
    for (Index t = 0; t < T; ++t) {
        m.X(t, 0) = 1.0;
        for (Index j = 1; j < q; ++j) m.X(t, j) = N(g);
        m.y(t) = (t > T / 2 ? 2.0 : 0.0) + m.X.row(t).sum() * 0.3 + N(g);
    }
    return m;
}

BreakModel mean_model(const std::vector<double>& y, double trimming = 0.15) {
    BreakModel m;
    m.trimming = trimming;
    m.y = Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size()));
    m.X = Matrix::Ones(m.y.size(), 1);
    return m;
}

void expect_segments_admissible(const std::vector<Index>& ends, Index T, Index h) {
    Index start = 0;
    for (Index e : ends) {
        EXPECT_GE(e - start + 1, h);
        start = e + 1;
    }
    EXPECT_GE(T - start, h);
}

}  // namespace

TEST(GlobalBreaks, ZeroBreaksIsFullSampleSsr) {
    std::mt19937_64 g(1);
    const BreakModel m = random_model(g, 30, 2, 0.15);
    const Partition p = global_breaks(m, 0);
    EXPECT_TRUE(p.ends.empty());
    EXPECT_NEAR(p.ssr, direct_ssr(m, 0, 29), 1e-9 * p.ssr);
}

TEST(GlobalBreaks, MeanShiftAtEleven) {
    std::vector<double> y(20);
    std::mt19937_64 g(2);
    std::normal_distribution<double> N(0.0, 0.1);
    for (int t = 0; t < 20; ++t) y[static_cast<std::size_t>(t)] = (t >= 10 ? 5.0 : 0.0) + N(g);
    const BreakModel m = mean_model(y);
    const Partition p = global_breaks(m, 1);
    ASSERT_EQ(p.ends.size(), 1u);
    EXPECT_EQ(p.ends[0], 9);  // regime two starts at observation 11
    const Partition brute = exhaustive(m, 1);
    EXPECT_EQ(brute.ends, p.ends);
}

TEST(GlobalBreaks, MatchesExhaustiveSearch) {
    std::mt19937_64 g(3);
    for (Index T : {12, 20, 26, 30}) {
        for (Index q : {1, 2}) {
            const BreakModel m = random_model(g, T, q, 0.25);
            const Index h = m.min_segment();
            for (int k = 0; k <= 3; ++k) {
                if ((k + 1) * h > T) continue;
                const Partition dp = global_breaks(m, k);
                const Partition ex = exhaustive(m, k);
                EXPECT_EQ(dp.ends, ex.ends) << "T=" << T << " q=" << q << " k=" << k;
                EXPECT_NEAR(dp.ssr, ex.ssr, 1e-9 * (1.0 + ex.ssr));
                expect_segments_admissible(dp.ends, T, h);
            }
        }
    }
}

TEST(GlobalBreaks, SsrNonIncreasingInK) {
    std::mt19937_64 g(4);
    const BreakModel m = random_model(g, 60, 2, 0.15);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 5; ++k) {
        const double s = global_breaks(m, k).ssr;
        EXPECT_LE(s, prev * (1.0 + 1e-12));
        prev = s;
    }
}

TEST(GlobalBreaks, InfeasibleK) {
    std::mt19937_64 g(5);
    const BreakModel m = random_model(g, 20, 1, 0.15);  // h = 3
    try {
        global_breaks(m, 7);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parameter);
    }
}

TEST(BreakModel, SegmentTooShortForRegressors) {
    std::mt19937_64 g(6);
    const BreakModel m = random_model(g, 20, 4, 0.15);  // h = 3 < q + 1
    EXPECT_THROW(global_breaks(m, 1), Error);
}

TEST(SupF, RejectsClearShiftAndReportsCriticalValue) {
    std::vector<double> y(40);
    std::mt19937_64 g(7);
    std::normal_distribution<double> N;
    for (int t = 0; t < 40; ++t) y[static_cast<std::size_t>(t)] = (t >= 20 ? 3.0 : 0.0) + N(g);
    const TestResult r = supf_test(mean_model(y), 0);
    EXPECT_TRUE(r.reject);
    EXPECT_GT(r.statistic, CriticalValueTable::bai_perron_5pct(1, 0));
    EXPECT_EQ(r.df1, 1.0);
}

TEST(SupF, InfeasibleLevel) {
    std::vector<double> y(20, 1.0);
    y[3] = 2.0;
    EXPECT_THROW(supf_test(mean_model(y), 6), Error);
    EXPECT_THROW(supf_test(mean_model(y), -1), Error);
}

TEST(SupF, SizeOnStableModel) {
    std::mt19937_64 g(8);
    std::normal_distribution<double> N;
    const int reps = 1000;
    int rej = 0;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> y(120);
        for (auto& v : y) v = 1.0 + N(g);
        rej += supf_test(mean_model(y), 0).reject;
    }
    EXPECT_NEAR(static_cast<double>(rej) / reps, 0.05, 0.02);
}

TEST(Sequential, ConstantSeriesHasNoBreaks) {
    const BreakResult r = sequential_breaks(mean_model(std::vector<double>(40, 2.5)));
    EXPECT_EQ(r.num_breaks, 0);
    EXPECT_TRUE(r.break_years.empty());
    EXPECT_EQ(r.f_statistics.size(), 1u);
}

TEST(Sequential, TwoEngineeredMeanShifts) {
    std::vector<double> y(60);
    std::mt19937_64 g(9);
    std::normal_distribution<double> N(0.0, 0.5);
    for (int t = 0; t < 60; ++t) {
        y[static_cast<std::size_t>(t)] = (t >= 20 ? 3.0 : 0.0) + (t >= 40 ? -4.0 : 0.0) + N(g);
    }
    BreakModel m = mean_model(y);
    m.start_year = 1960;
    const BreakResult r = sequential_breaks(m);
    ASSERT_EQ(r.num_breaks, 2);
    EXPECT_NEAR(r.break_years[0], 1980, 1);
    EXPECT_NEAR(r.break_years[1], 2000, 1);
    EXPECT_EQ(r.f_statistics.size(), 3u);
    EXPECT_EQ(r.critical_values.size(), r.f_statistics.size());
    EXPECT_LT(r.break_years[0], r.break_years[1]);
    expect_segments_admissible(r.break_ends, 60, m.min_segment());
}

TEST(Sequential, BreakDatesStrictlyIncreasing) {
    std::mt19937_64 g(10);
    for (int rep = 0; rep < 10; ++rep) {
        const BreakModel m = random_model(g, 50, 2, 0.15);
        const BreakResult r = sequential_breaks(m);
        for (std::size_t i = 1; i < r.break_years.size(); ++i) EXPECT_LT(r.break_years[i - 1], r.break_years[i]);
        expect_segments_admissible(r.break_ends, 50, m.min_segment());
        EXPECT_EQ(static_cast<int>(r.break_years.size()), r.num_breaks);
    }
}

TEST(CriticalValues, BaiPerronFourRegressors) {
    EXPECT_EQ(CriticalValueTable::bai_perron_5pct(4, 0), 16.19);
    EXPECT_EQ(CriticalValueTable::bai_perron_5pct(4, 1), 18.11);
    EXPECT_EQ(CriticalValueTable::bai_perron_5pct(4, 2), 18.93);
    EXPECT_EQ(CriticalValueTable::bai_perron_5pct(4, 3), 19.64);
}
