#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tsecon/core/ols.hpp"
#include "tsecon/core/series.hpp"

namespace tsecon {

enum class Deterministic { none, intercept, intercept_trend };

inline std::string_view to_string(Deterministic d) noexcept {
    switch (d) {
        case Deterministic::none: return "none";
        case Deterministic::intercept: return "intercept";
        case Deterministic::intercept_trend: return "intercept_trend";
    }
    return "?";
}

inline int deterministic_count(Deterministic d) noexcept {
    return d == Deterministic::none ? 0 : (d == Deterministic::intercept ? 1 : 2);
}

/// Regression inputs built from a Dataset. Regressor columns are ordered
/// variable-major (lags 1..p of the first variable, then of the second, ...)
/// followed by the deterministic terms, so the block of lags of variable v
/// is columns [v*p, (v+1)*p).
struct DesignMatrix {
    Matrix targets;     // t_eff x n
    Matrix regressors;  // t_eff x k
    std::vector<std::string> column_labels;
    std::vector<std::string> target_labels;
    Index t_eff = 0;
    int lag_order = 0;
    int first_year = 0;  // calendar year of the first target row
    bool differenced = false;

    std::vector<Index> lag_block(Index variable) const {
        std::vector<Index> idx;
        for (int i = 0; i < lag_order; ++i) idx.push_back(variable * lag_order + i);
        return idx;
    }
};

/// Dataset values as a T x n matrix, first-differenced when requested.
inline Matrix data_matrix(const Dataset& d, bool differenced = false) {
    const Index T = static_cast<Index>(d.num_obs());
    const Index n = static_cast<Index>(d.num_vars());
    const Index rows = differenced ? T - 1 : T;
    if (rows < 1) throw Error(ErrorKind::insufficient_data, "dataset too short");
    Matrix Z(rows, n);
    for (Index v = 0; v < n; ++v) {
        const auto vals = d[static_cast<std::size_t>(v)].values();
        for (Index t = 0; t < rows; ++t) {
            Z(t, v) = differenced ? vals[static_cast<std::size_t>(t + 1)] - vals[static_cast<std::size_t>(t)]
                                  : vals[static_cast<std::size_t>(t)];
        }
    }
    return Z;
}

/// Lagged design for VAR-type regressions. `presample` forces the first
/// target row to be at least that index of the (possibly differenced)
/// series, which lets several lag orders share one estimation sample.
inline DesignMatrix lag_matrix(const Dataset& d, int p, Deterministic det, bool differenced = false,
                               int presample = 0) {
    if (p < 0) throw Error(ErrorKind::parameter, "lag order must be non-negative");
    const Matrix Z = data_matrix(d, differenced);
    const Index n = Z.cols();
    const Index start = std::max(p, presample);
    const Index T = Z.rows() - start;
    const Index k = n * p + deterministic_count(det);
    if (T <= k || T <= 0) {
        throw Error(ErrorKind::degrees_of_freedom, "effective sample " + std::to_string(std::max<Index>(T, 0)) +
                                                       " too small for " + std::to_string(k) + " regressors");
    }
    DesignMatrix dm;
    dm.t_eff = T;
    dm.lag_order = p;
    dm.differenced = differenced;
    dm.first_year = d.start_year() + (differenced ? 1 : 0) + static_cast<int>(start);
    dm.targets = Z.bottomRows(T);
    dm.regressors.resize(T, k);
    const std::string pre = differenced ? "D(" : "";
    const std::string post = differenced ? ")" : "";
    for (Index v = 0; v < n; ++v) {
        const std::string& name = d[static_cast<std::size_t>(v)].name();
        dm.target_labels.push_back(pre + name + post);
        for (int i = 1; i <= p; ++i) {
            dm.regressors.col(v * p + (i - 1)) = Z.block(start - i, v, T, 1);
            dm.column_labels.push_back(pre + name + post + "(-" + std::to_string(i) + ")");
        }
    }
    Index c = n * p;
    if (det != Deterministic::none) {
        dm.regressors.col(c++).setOnes();
        dm.column_labels.push_back("C");
    }
    if (det == Deterministic::intercept_trend) {
        for (Index t = 0; t < T; ++t) dm.regressors(t, c) = static_cast<double>(start + t + 1);
        dm.column_labels.push_back("@TREND");
    }
    return dm;
}

inline SystemFit system_ols(const DesignMatrix& dm) { return system_ols(dm.targets, dm.regressors); }

}  // namespace tsecon
