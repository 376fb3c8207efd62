#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "tsecon/error.hpp"

namespace tsecon {

/// Bartlett-kernel (Newey-West) long-run variance of a series, divisor T.
inline double newey_west_lrv(std::span<const double> u, int bandwidth) {
    const auto T = static_cast<long>(u.size());
    if (bandwidth < 0 || bandwidth >= T) {
        throw Error(ErrorKind::parameter, "bandwidth must satisfy 0 <= bandwidth < length");
    }
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= static_cast<double>(T);
    auto gamma = [&](long j) {
        double s = 0.0;
        for (long t = j; t < T; ++t) s += (u[t] - mean) * (u[t - j] - mean);
        return s / static_cast<double>(T);
    };
    double lrv = gamma(0);
    for (long j = 1; j <= bandwidth; ++j) {
        lrv += 2.0 * (1.0 - static_cast<double>(j) / static_cast<double>(bandwidth + 1)) * gamma(j);
    }
    return std::max(lrv, 0.0);
}

/// Automatic bandwidth floor(4 (T/100)^(1/4)).
inline int newey_west_bandwidth(std::size_t T) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(T) / 100.0, 0.25)));
}

}  // namespace tsecon
