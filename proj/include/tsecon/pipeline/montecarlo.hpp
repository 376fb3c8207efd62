#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "tsecon/coint/johansen.hpp"
#include "tsecon/diagnostics/diagnostics.hpp"
#include "tsecon/unitroot/unitroot.hpp"
#include "tsecon/var/var.hpp"

namespace tsecon {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for replication `rep` of experiment `stream`, independent of thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t rep) {
    return splitmix64(splitmix64(master ^ splitmix64(stream)) + rep);
}

inline std::uint64_t stream_id(const std::string& name) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct MonteCarloResult {
    std::string experiment;
    int replications = 0;
    int rejections = 0;
    int failures = 0;  // replications that raised an error
    double rate() const {
        const int valid = replications - failures;
        return valid > 0 ? static_cast<double>(rejections) / valid : 0.0;
    }
};

/// Runs `rep_fn(rng)` -> bool (rejection) for each replication in parallel.
template <class F>
MonteCarloResult run_replications(const std::string& name, int reps, std::uint64_t seed, F rep_fn, int threads = 0) {
    if (reps < 1) throw Error(ErrorKind::parameter, "need at least one replication");
    unsigned nt = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, static_cast<unsigned>(reps));
    const std::uint64_t stream = stream_id(name);
    struct Tally {
        int rej = 0, fail = 0;
    };
    auto work = [&](unsigned w) {
        Tally t;
        for (int r = static_cast<int>(w); r < reps; r += static_cast<int>(nt)) {
            std::mt19937_64 rng(derive_seed(seed, stream, static_cast<std::uint64_t>(r)));
            try {
                if (rep_fn(rng)) ++t.rej;
            } catch (const Error&) {
                ++t.fail;
            }
        }
        return t;
    };
    std::vector<std::future<Tally>> futs;
    for (unsigned w = 0; w < nt; ++w) futs.push_back(std::async(std::launch::async, work, w));
    MonteCarloResult res;
    res.experiment = name;
    res.replications = reps;
    for (auto& f : futs) {
        const Tally t = f.get();
        res.rejections += t.rej;
        res.failures += t.fail;
    }
    return res;
}

namespace mc {

inline Vector normals(std::mt19937_64& rng, Index n) {
    std::normal_distribution<double> N(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = N(rng);
    return v;
}

inline Series random_walk(std::mt19937_64& rng, Index T) {
    const Vector e = normals(rng, T);
    std::vector<double> y(static_cast<std::size_t>(T));
    double acc = 0.0;
    for (Index t = 0; t < T; ++t) y[static_cast<std::size_t>(t)] = acc += e(t);
    return Series("y", 1, std::move(y));
}

inline Series white_noise(std::mt19937_64& rng, Index T) {
    const Vector e = normals(rng, T);
    return Series("y", 1, std::vector<double>(e.data(), e.data() + e.size()));
}

inline SystemFit linear_fit(std::mt19937_64& rng, Index T, Index k) {
    Matrix X(T, k + 1);
    X.col(0).setOnes();
    for (Index j = 1; j <= k; ++j) X.col(j) = normals(rng, T);
    Vector beta = Vector::LinSpaced(k + 1, 1.0, 0.5);
    const Vector y = X * beta + normals(rng, T);
    return ols_fit(y, X);
}

/// Bivariate stable VAR(1) in which y2 does not cause y1.
inline Dataset noncausal_var(std::mt19937_64& rng, Index T) {
    const Index burn = 50;
    const Vector e1 = normals(rng, T + burn), e2 = normals(rng, T + burn);
    std::vector<double> a(static_cast<std::size_t>(T)), b(static_cast<std::size_t>(T));
    double y1 = 0.0, y2 = 0.0;
    for (Index t = 0; t < T + burn; ++t) {
        const double n1 = 0.5 * y1 + e1(t);
        const double n2 = 0.3 * y1 + 0.4 * y2 + e2(t);
        y1 = n1;
        y2 = n2;
        if (t >= burn) {
            a[static_cast<std::size_t>(t - burn)] = y1;
            b[static_cast<std::size_t>(t - burn)] = y2;
        }
    }
    return Dataset({Series("y1", 1, std::move(a)), Series("y2", 1, std::move(b))});
}

/// y1 a random walk with drift, y2 = y1 + AR(1) noise: rank 1, beta = (1, -1).
inline Dataset cointegrated_pair(std::mt19937_64& rng, Index T, double drift = 0.0, double phi = 0.5) {
    const Vector e = normals(rng, T), u = normals(rng, T);
    std::vector<double> a(static_cast<std::size_t>(T)), b(static_cast<std::size_t>(T));
    double x = 0.0, z = 0.0;
    for (Index t = 0; t < T; ++t) {
        x += drift + e(t);
        z = phi * z + u(t);
        a[static_cast<std::size_t>(t)] = x;
        b[static_cast<std::size_t>(t)] = x + z;
    }
    return Dataset({Series("y1", 1, std::move(a)), Series("y2", 1, std::move(b))});
}

}  // namespace mc

inline const std::vector<std::string>& size_experiments() {
    static const std::vector<std::string> names{"adf", "kpss", "breusch_godfrey", "white", "jarque_bera", "var_granger"};
    return names;
}

/// Empirical rejection rate of a test under its null.
inline MonteCarloResult size_experiment(const std::string& name, int T, int reps, std::uint64_t seed,
                                        double level = 0.05, int threads = 0) {
    const Index n = T;
    if (name == "adf") {
        return run_replications(name, reps, seed, [=](std::mt19937_64& g) {
            const UnitRootResult r = adf_test(mc::random_walk(g, n), Deterministic::intercept);
            return r.statistic < adf_critical_value(Deterministic::intercept, level_from(level), static_cast<std::size_t>(r.nobs));
        }, threads);
    }
    if (name == "kpss") {
        return run_replications(name, reps, seed, [=](std::mt19937_64& g) {
            const UnitRootResult r = kpss_test(mc::white_noise(g, n), Deterministic::intercept);
            return r.statistic > CriticalValueTable::kpss_value(Deterministic::intercept, level_from(level));
        }, threads);
    }
    if (name == "breusch_godfrey") {
        return run_replications(name, reps, seed, [=](std::mt19937_64& g) {
            return breusch_godfrey(mc::linear_fit(g, n, 2), 1, 0, level).reject;
        }, threads);
    }
    if (name == "white") {
        return run_replications(name, reps, seed, [=](std::mt19937_64& g) {
            return white_test(mc::linear_fit(g, n, 2), std::nullopt, 0, level).test.reject;
        }, threads);
    }
    if (name == "jarque_bera") {
        return run_replications(name, reps, seed, [=](std::mt19937_64& g) {
            return jarque_bera(mc::normals(g, n), level).reject;
        }, threads);
    }
    if (name == "var_granger") {
        return run_replications(name, reps, seed, [=](std::mt19937_64& g) {
            const VarFit v = var_fit(mc::noncausal_var(g, n), 2);
            return var_granger(v, "y2", "y1", level).reject;
        }, threads);
    }
    throw Error(ErrorKind::validation, "unknown Monte Carlo experiment '" + name + "'");
}

struct JohansenRecovery {
    int replications = 0;
    int rank_one = 0;
    std::vector<double> beta_errors;  // |b2 + 1| per replication with rank >= 1
    double selection_rate() const { return replications ? static_cast<double>(rank_one) / replications : 0.0; }
    double median_beta_error() const {
        if (beta_errors.empty()) return std::numeric_limits<double>::infinity();
        std::vector<double> v = beta_errors;
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    }
};

/// Rank selection and beta recovery on the driftless cointegrated pair,
/// p = 2, constant restricted to the cointegrating relation.
inline JohansenRecovery johansen_recovery(int T, int reps, std::uint64_t seed) {
    JohansenRecovery out;
    out.replications = reps;
    out.beta_errors.assign(static_cast<std::size_t>(reps), std::numeric_limits<double>::quiet_NaN());
    std::vector<int> ranks(static_cast<std::size_t>(reps), -1);
    const std::uint64_t stream = stream_id("johansen_rank1");
    const unsigned nt = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(reps)));
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < nt; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (int r = static_cast<int>(w); r < reps; r += static_cast<int>(nt)) {
                std::mt19937_64 g(derive_seed(seed, stream, static_cast<std::uint64_t>(r)));
                const JohansenResult j = johansen_test(mc::cointegrated_pair(g, T), 2, JohansenCase::restricted_constant);
                ranks[static_cast<std::size_t>(r)] = j.selected_rank;
                const Matrix b = cointegrating_vectors(j, 1);
                out.beta_errors[static_cast<std::size_t>(r)] = std::abs(b(1, 0) + 1.0);
            }
        }));
    }
    for (auto& f : futs) f.get();
    out.rank_one = static_cast<int>(std::count(ranks.begin(), ranks.end(), 1));
    return out;
}

}  // namespace tsecon
