#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "tsecon/core/design.hpp"
#include "tsecon/error.hpp"

namespace tsecon {

enum class Level { one_pct, five_pct, ten_pct };

inline std::size_t level_index(Level l) noexcept { return static_cast<std::size_t>(l); }

inline Level level_from(double alpha) {
    if (std::abs(alpha - 0.01) < 1e-12) return Level::one_pct;
    if (std::abs(alpha - 0.05) < 1e-12) return Level::five_pct;
    if (std::abs(alpha - 0.10) < 1e-12) return Level::ten_pct;
    throw Error(ErrorKind::parameter, "critical values tabulated only at 1%, 5% and 10%");
}

/// Johansen deterministic cases, numbered as in the usual five-case scheme.
enum class JohansenCase {
    none = 1,                  // no deterministic terms
    restricted_constant = 2,   // constant inside the cointegrating relation
    unrestricted_constant = 3, // constant in the VECM, no trend
    restricted_trend = 4,      // unrestricted constant, trend inside the relation
    unrestricted_trend = 5,    // constant and trend in the VECM
};

/// Compiled-in critical values. Values at the 5% level are the ones used by
/// the decision rules; the finite-sample ADF entries are MacKinnon
/// response-surface evaluations at T = 40.
struct CriticalValueTable {
    static constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

    // ADF, finite sample T ~ 40: [intercept, intercept_trend][1%, 5%, 10%]
    static constexpr std::array<std::array<double, 3>, 2> adf{{{-3.61, -2.94, -2.61}, {-4.21, -3.53, -3.20}}};
    // KPSS (level, trend): [1%, 5%, 10%]
    static constexpr std::array<std::array<double, 3>, 2> kpss{{{0.739, 0.46, 0.347}, {0.216, 0.146, 0.119}}};
    // Innovational-outlier break unit-root test: [1%, 5%, 10%]
    static constexpr std::array<double, 3> perron{-5.92, -5.23, -4.92};

    // Johansen 5% values indexed by (n - r) - 1; only case 3 is tabulated past n - r = 4.
    static constexpr std::array<std::array<double, 6>, 5> johansen_trace{{
        {4.129906, 12.32090, 24.27596, 40.17493, kNA, kNA},
        {9.164546, 20.26184, 35.19275, 54.07904, kNA, kNA},
        {3.841466, 15.49471, 29.79707, 47.85613, 69.81889, 95.75366},
        {12.51798, 25.87211, 42.91525, 63.87610, kNA, kNA},
        {3.841466, 18.39771, 35.01090, 55.24578, kNA, kNA},
    }};
    static constexpr std::array<std::array<double, 6>, 5> johansen_maxeig{{
        {4.129906, 11.22480, 17.79730, 24.15921, kNA, kNA},
        {9.164546, 15.89210, 22.29962, 28.58808, kNA, kNA},
        {3.841466, 14.26460, 21.13162, 27.58434, 33.87687, 40.07757},
        {12.51798, 19.38704, 25.82321, 32.11832, kNA, kNA},
        {3.841466, 17.14769, 24.25202, 30.81507, kNA, kNA},
    }};

    // Sequential sup-F(l+1 | l) at 5%, trimming 0.15, indexed [q - 1][l].
    static constexpr std::array<std::array<double, 5>, 5> bai_perron{{
        {8.58, 10.13, 11.14, 11.83, 12.25},
        {11.47, 12.95, 14.03, 14.85, 15.29},
        {13.98, 15.72, 16.83, 17.61, 18.14},
        {16.19, 18.11, 18.93, 19.64, 20.19},
        {18.23, 19.91, 20.99, 21.71, 22.37},
    }};

    static double adf_value(Deterministic det, Level l) {
        if (det == Deterministic::none) throw Error(ErrorKind::parameter, "no ADF table for the no-deterministic case");
        return adf[det == Deterministic::intercept ? 0 : 1][level_index(l)];
    }
    static double kpss_value(Deterministic det, Level l) {
        if (det == Deterministic::none) throw Error(ErrorKind::parameter, "KPSS needs a deterministic term");
        return kpss[det == Deterministic::intercept ? 0 : 1][level_index(l)];
    }
    static double perron_value(Level l) { return perron[level_index(l)]; }

    static double johansen_trace_5pct(JohansenCase c, int n_minus_r) {
        return lookup(johansen_trace, c, n_minus_r);
    }
    static double johansen_maxeig_5pct(JohansenCase c, int n_minus_r) {
        return lookup(johansen_maxeig, c, n_minus_r);
    }

    static double bai_perron_5pct(int q, int l) {
        if (q < 1 || q > 5 || l < 0 || l > 4) {
            throw Error(ErrorKind::parameter, "no sequential sup-F critical value for q=" + std::to_string(q) +
                                                  ", l=" + std::to_string(l));
        }
        return bai_perron[static_cast<std::size_t>(q - 1)][static_cast<std::size_t>(l)];
    }

private:
    static double lookup(const std::array<std::array<double, 6>, 5>& tab, JohansenCase c, int n_minus_r) {
        const double v = (n_minus_r >= 1 && n_minus_r <= 6)
                             ? tab[static_cast<std::size_t>(c) - 1][static_cast<std::size_t>(n_minus_r - 1)]
                             : kNA;
        if (std::isnan(v)) {
            throw Error(ErrorKind::parameter, "no Johansen critical value for case " +
                                                  std::to_string(static_cast<int>(c)) + ", n - r = " +
                                                  std::to_string(n_minus_r));
        }
        return v;
    }
};

/// MacKinnon (2010) response surface for the Dickey-Fuller t statistic,
/// single variable, sample size T.
inline double adf_critical_value(Deterministic det, Level l, std::size_t T) {
    struct Row {
        double binf, b1, b2, b3;
    };
    static constexpr std::array<std::array<Row, 3>, 3> rs{{
        {{{-2.56574, -2.2358, -3.627, 0.0}, {-1.94100, -0.2686, -3.365, 31.223}, {-1.61682, 0.2656, -2.714, 25.364}}},
        {{{-3.43035, -6.5393, -16.786, -79.433}, {-2.86154, -2.8903, -4.234, -40.040}, {-2.56677, -1.5384, -2.809, 0.0}}},
        {{{-3.95877, -9.0531, -28.428, -134.155},
          {-3.41049, -4.3904, -9.036, -45.374},
          {-3.12705, -2.5856, -3.925, -22.380}}},
    }};
    const auto& r = rs[static_cast<std::size_t>(deterministic_count(det))][level_index(l)];
    const double t = static_cast<double>(T);
    return r.binf + r.b1 / t + r.b2 / (t * t) + r.b3 / (t * t * t);
}

}  // namespace tsecon
