#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "tsecon/core/ols.hpp"
#include "tsecon/critical_values.hpp"

namespace tsecon {

/// Pure structural-change regression y = X b_j + u within each regime.
struct BreakModel {
    Vector y;
    Matrix X;
    double trimming = 0.15;
    int max_breaks = 5;
    int start_year = 0;  // calendar year of observation 0, used for reporting

    Index nobs() const noexcept { return y.size(); }
    Index q() const noexcept { return X.cols(); }
    Index min_segment() const {
        return static_cast<Index>(std::ceil(trimming * static_cast<double>(y.size())));
    }
};

struct Partition {
    std::vector<Index> ends;  // index of the last observation of each regime except the final one
    double ssr = 0.0;

    /// Calendar year of the first observation of each new regime.
    std::vector<int> break_years(int start_year) const {
        std::vector<int> out;
        for (Index e : ends) out.push_back(start_year + static_cast<int>(e) + 1);
        return out;
    }
};

struct BreakResult {
    int num_breaks = 0;
    std::vector<int> break_years;
    std::vector<Index> break_ends;
    std::vector<double> f_statistics;
    std::vector<double> critical_values;
    double segment_ssr = 0.0;
};

namespace detail {

inline void check_break_model(const BreakModel& m) {
    if (m.y.size() != m.X.rows()) throw Error(ErrorKind::parameter, "y and X row counts differ");
    if (!(m.trimming > 0.0 && m.trimming < 0.5)) throw Error(ErrorKind::parameter, "trimming must lie in (0, 0.5)");
    if (m.min_segment() < m.q() + 1) {
        throw Error(ErrorKind::parameter, "minimum segment length " + std::to_string(m.min_segment()) +
                                              " must exceed the number of shifting regressors");
    }
}

inline double inf() { return std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// SSR of every admissible segment [i, j] (length >= h), built by
/// recursive residuals from each start index. Entries for inadmissible
/// segments are +inf.
class SegmentSsr {
public:
    explicit SegmentSsr(const BreakModel& m) : T_(m.nobs()), h_(m.min_segment()), table_(T_ * T_, detail::inf()) {
        detail::check_break_model(m);
        const Index q = m.q();
        for (Index i = 0; i + h_ <= T_; ++i) {
            // Exact fit on the first h observations, then rank-one updates.
            const Matrix Xi = m.X.middleRows(i, h_);
            const Vector yi = m.y.segment(i, h_);
            Eigen::ColPivHouseholderQR<Matrix> qr(Xi);
            if (qr.rank() < q) continue;
            Vector b = qr.solve(yi);
            double ssr = (yi - Xi * b).squaredNorm();
            Matrix P = (Xi.transpose() * Xi).inverse();
            at(i, i + h_ - 1) = ssr;
            for (Index j = i + h_; j < T_; ++j) {
                const Vector x = m.X.row(j).transpose();
                const Vector Px = P * x;
                const double f = 1.0 + x.dot(Px);
                const double e = m.y(j) - x.dot(b);
                ssr += e * e / f;
                b += Px * (e / f);
                P -= (Px * Px.transpose()) / f;
                at(i, j) = ssr;
            }
        }
    }

    double operator()(Index i, Index j) const { return table_[static_cast<std::size_t>(i * T_ + j)]; }
    Index nobs() const noexcept { return T_; }
    Index min_segment() const noexcept { return h_; }

private:
    double& at(Index i, Index j) { return table_[static_cast<std::size_t>(i * T_ + j)]; }

    Index T_;
    Index h_;
    std::vector<double> table_;
};

/// Global SSR minimizer over partitions of [first, last] into k+1 segments
/// using the segment table. Ties keep the earliest break date.
inline Partition optimal_partition(const SegmentSsr& seg, int k, Index first, Index last) {
    const Index h = seg.min_segment();
    const Index len = last - first + 1;
    if (k < 0 || (k + 1) * h > len) {
        throw Error(ErrorKind::parameter, std::to_string(k) + " breaks infeasible with minimum segment " +
                                              std::to_string(h) + " on " + std::to_string(len) + " observations");
    }
    if (k == 0) return Partition{{}, seg(first, last)};
    // best[m][j]: minimal SSR of [first, j] with m breaks; arg[m][j]: last break end.
    std::vector<std::vector<double>> best(static_cast<std::size_t>(k + 1), std::vector<double>(seg.nobs(), detail::inf()));
    std::vector<std::vector<Index>> arg(static_cast<std::size_t>(k + 1), std::vector<Index>(seg.nobs(), -1));
    for (Index j = first + h - 1; j <= last; ++j) best[0][static_cast<std::size_t>(j)] = seg(first, j);
    for (int mb = 1; mb <= k; ++mb) {
        const auto um = static_cast<std::size_t>(mb);
        for (Index j = first + (mb + 1) * h - 1; j <= last; ++j) {
            double b = detail::inf();
            Index a = -1;
            for (Index e = first + mb * h - 1; e + h <= j; ++e) {
                const double v = best[um - 1][static_cast<std::size_t>(e)] + seg(e + 1, j);
                if (v < b) {
                    b = v;
                    a = e;
                }
            }
            best[um][static_cast<std::size_t>(j)] = b;
            arg[um][static_cast<std::size_t>(j)] = a;
        }
    }
    Partition p;
    p.ssr = best[static_cast<std::size_t>(k)][static_cast<std::size_t>(last)];
    if (!std::isfinite(p.ssr)) throw Error(ErrorKind::singularity, "no partition with full-rank segments");
    Index j = last;
    for (int mb = k; mb >= 1; --mb) {
        const Index e = arg[static_cast<std::size_t>(mb)][static_cast<std::size_t>(j)];
        p.ends.insert(p.ends.begin(), e);
        j = e;
    }
    return p;
}

inline Partition global_breaks(const BreakModel& m, int k) {
    const SegmentSsr seg(m);
    return optimal_partition(seg, k, 0, m.nobs() - 1);
}

/// Sup-F test of l against l+1 breaks: the largest SSR reduction from
/// adding one break inside any regime of the optimal l-break partition.
inline TestResult supf_test(const BreakModel& m, int l, const SegmentSsr& seg, Partition* augmented = nullptr) {
    const Index T = m.nobs();
    const Index q = m.q();
    const Index h = seg.min_segment();
    if (l < 0 || (l + 2) * h > T) throw Error(ErrorKind::parameter, std::to_string(l + 1) + " breaks infeasible");
    const Partition base = optimal_partition(seg, l, 0, T - 1);
    std::vector<Index> starts{0};
    for (Index e : base.ends) starts.push_back(e + 1);
    std::vector<Index> stops = base.ends;
    stops.push_back(T - 1);

    double best_gain = -1.0;
    std::size_t best_seg = 0;
    Index best_end = -1;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const Index a = starts[s];
        const Index b = stops[s];
        if (b - a + 1 < 2 * h) continue;
        const Partition one = optimal_partition(seg, 1, a, b);
        const double gain = seg(a, b) - one.ssr;
        if (gain > best_gain) {
            best_gain = gain;
            best_seg = s;
            best_end = one.ends[0];
        }
    }
    if (best_end < 0) throw Error(ErrorKind::parameter, "no regime long enough for an additional break");
    const double ssr_next = base.ssr - best_gain;
    const double dof = static_cast<double>(T - (l + 2) * q);
    if (dof <= 0.0) throw Error(ErrorKind::degrees_of_freedom, "too few observations for the sup-F scaling");
    // A perfectly fitted base model has nothing left to explain.
    const double tol = 1e-20 * (1.0 + m.y.squaredNorm());
    double stat = 0.0;
    if (base.ssr > tol && best_gain > 0.0) {
        stat = ssr_next > tol ? (best_gain / static_cast<double>(q)) / (ssr_next / dof) : detail::inf();
    }

    if (augmented) {
        Partition aug = base;
        aug.ends.insert(aug.ends.begin() + static_cast<std::ptrdiff_t>(best_seg), best_end);
        aug.ssr = ssr_next;
        *augmented = aug;
    }
    TestResult r;
    r.name = "supF(" + std::to_string(l + 1) + "|" + std::to_string(l) + ")";
    r.statistic = stat;
    r.distribution = Distribution::fisher_f;
    r.df1 = static_cast<double>(q);
    r.df2 = dof;
    r.level = 0.05;
    const double cv = CriticalValueTable::bai_perron_5pct(static_cast<int>(q), l);
    r.reject = stat > cv;
    // Nonstandard null distribution; the p-value field carries no tabulated value.
    r.p_value = std::numeric_limits<double>::quiet_NaN();
    return r;
}

inline TestResult supf_test(const BreakModel& m, int l) { return supf_test(m, l, SegmentSsr(m)); }

/// Sequential l vs l+1 procedure, stopping at the first non-rejection.
inline BreakResult sequential_breaks(const BreakModel& m) {
    const SegmentSsr seg(m);
    const Index T = m.nobs();
    const Index h = seg.min_segment();
    BreakResult r;
    for (int l = 0; l < m.max_breaks; ++l) {
        if ((l + 2) * h > T) break;
        const TestResult t = supf_test(m, l, seg);
        r.f_statistics.push_back(t.statistic);
        r.critical_values.push_back(CriticalValueTable::bai_perron_5pct(static_cast<int>(m.q()), l));
        if (!t.reject) break;
        r.num_breaks = l + 1;
    }
    const Partition p = optimal_partition(seg, r.num_breaks, 0, T - 1);
    r.break_ends = p.ends;
    r.break_years = p.break_years(m.start_year);
    r.segment_ssr = p.ssr;
    return r;
}

}  // namespace tsecon
