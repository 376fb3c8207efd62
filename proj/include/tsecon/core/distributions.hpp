#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace tsecon {

enum class Distribution { chi_square, student_t, fisher_f };

inline std::string_view to_string(Distribution d) noexcept {
    switch (d) {
        case Distribution::chi_square: return "chi-square";
        case Distribution::student_t: return "t";
        case Distribution::fisher_f: return "F";
    }
    return "?";
}

inline double chi2_upper(double stat, double df) {
    if (!(stat > 0.0)) return 1.0;
    if (!std::isfinite(stat)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
}

inline double chi2_quantile(double prob, double df) {
    return boost::math::quantile(boost::math::chi_squared(df), prob);
}

inline double t_two_sided(double stat, double df) {
    if (!std::isfinite(stat)) return 0.0;
    return 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::abs(stat)));
}

inline double f_upper(double stat, double df1, double df2) {
    if (!(stat > 0.0)) return 1.0;
    if (!std::isfinite(stat)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), stat));
}

/// Outcome of a classical hypothesis test.
struct TestResult {
    std::string name;
    double statistic = 0.0;
    Distribution distribution = Distribution::chi_square;
    double df1 = 0.0;
    double df2 = 0.0;  // F denominator / t degrees of freedom; 0 when unused
    double p_value = 1.0;
    double level = 0.05;
    bool reject = false;
};

inline TestResult make_chi2_result(std::string name, double stat, double df, double level = 0.05) {
    TestResult r;
    r.name = std::move(name);
    r.statistic = stat;
    r.distribution = Distribution::chi_square;
    r.df1 = df;
    r.p_value = std::clamp(chi2_upper(stat, df), 0.0, 1.0);
    r.level = level;
    r.reject = r.p_value < level;
    return r;
}

inline TestResult make_t_result(std::string name, double stat, double df, double level = 0.05) {
    TestResult r;
    r.name = std::move(name);
    r.statistic = stat;
    r.distribution = Distribution::student_t;
    r.df1 = df;
    r.p_value = std::clamp(t_two_sided(stat, df), 0.0, 1.0);
    r.level = level;
    r.reject = r.p_value < level;
    return r;
}

inline TestResult make_f_result(std::string name, double stat, double df1, double df2, double level = 0.05) {
    TestResult r;
    r.name = std::move(name);
    r.statistic = stat;
    r.distribution = Distribution::fisher_f;
    r.df1 = df1;
    r.df2 = df2;
    r.p_value = std::clamp(f_upper(stat, df1, df2), 0.0, 1.0);
    r.level = level;
    r.reject = r.p_value < level;
    return r;
}

}  // namespace tsecon
