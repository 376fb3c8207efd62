#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsecon/error.hpp"

namespace tsecon {

/// Annual time series. Values are contiguous: year i of the sample is
/// start_year + i, and there are no missing entries.
class Series {
public:
    Series(std::string name, int start_year, std::vector<double> values)
        : name_(std::move(name)), start_year_(start_year), values_(std::move(values)) {
        if (values_.empty()) {
            throw Error(ErrorKind::insufficient_data, "series '" + name_ + "' has no values");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw Error(ErrorKind::domain, "series '" + name_ + "' has a non-finite value in year " +
                                                   std::to_string(start_year_ + static_cast<int>(i)));
            }
        }
    }

    const std::string& name() const noexcept { return name_; }
    int start_year() const noexcept { return start_year_; }
    int end_year() const noexcept { return start_year_ + static_cast<int>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value for a calendar year; throws if the year is outside the sample.
    double at_year(int year) const {
        if (year < start_year_ || year > end_year()) {
            throw Error(ErrorKind::parameter, "year " + std::to_string(year) + " outside sample of '" + name_ + "'");
        }
        return values_[static_cast<std::size_t>(year - start_year_)];
    }

    Series renamed(std::string name) const { return Series(std::move(name), start_year_, values_); }

    /// Restrict to [first, last] (inclusive calendar years).
    Series slice(int first, int last) const {
        if (first < start_year_ || last > end_year() || first > last) {
            throw Error(ErrorKind::alignment, "cannot slice '" + name_ + "' to " + std::to_string(first) + "-" +
                                                  std::to_string(last));
        }
        auto b = values_.begin() + (first - start_year_);
        return Series(name_, first, std::vector<double>(b, b + (last - first + 1)));
    }

private:
    std::string name_;
    int start_year_;
    std::vector<double> values_;
};

/// Series aligned on a common sample, addressed by role name (TRADE, FD, ...).
class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<Series> variables) : vars_(std::move(variables)) {
        if (vars_.empty()) throw Error(ErrorKind::alignment, "dataset needs at least one series");
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i].start_year() != vars_[0].start_year() || vars_[i].size() != vars_[0].size()) {
                throw Error(ErrorKind::alignment, "series '" + vars_[i].name() + "' is not on the common sample");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (vars_[j].name() == vars_[i].name()) {
                    throw Error(ErrorKind::alignment, "duplicate role '" + vars_[i].name() + "'");
                }
            }
        }
    }

    std::size_t num_vars() const noexcept { return vars_.size(); }
    std::size_t num_obs() const noexcept { return vars_.empty() ? 0 : vars_[0].size(); }
    int start_year() const { return vars_.at(0).start_year(); }
    int end_year() const { return vars_.at(0).end_year(); }
    const std::vector<Series>& variables() const noexcept { return vars_; }
    const Series& operator[](std::size_t i) const { return vars_.at(i); }

    std::vector<std::string> roles() const {
        std::vector<std::string> out;
        out.reserve(vars_.size());
        for (const auto& s : vars_) out.push_back(s.name());
        return out;
    }

    bool has(const std::string& role) const {
        return std::any_of(vars_.begin(), vars_.end(), [&](const Series& s) { return s.name() == role; });
    }

    std::size_t index_of(const std::string& role) const {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i].name() == role) return i;
        }
        throw Error(ErrorKind::parameter, "role '" + role + "' not present in dataset");
    }

    const Series& get(const std::string& role) const { return vars_[index_of(role)]; }

    /// New dataset holding the given roles in the given order.
    Dataset select(const std::vector<std::string>& roles) const {
        std::vector<Series> out;
        out.reserve(roles.size());
        for (const auto& r : roles) out.push_back(get(r));
        return Dataset(std::move(out));
    }

    Dataset slice(int first, int last) const {
        std::vector<Series> out;
        for (const auto& s : vars_) out.push_back(s.slice(first, last));
        return Dataset(std::move(out));
    }

private:
    std::vector<Series> vars_;
};

/// order-th difference; the result starts `order` years later.
inline Series diff(const Series& s, int order = 1) {
    if (order < 1) throw Error(ErrorKind::parameter, "difference order must be positive");
    if (static_cast<std::size_t>(order) >= s.size()) {
        throw Error(ErrorKind::insufficient_data, "cannot difference '" + s.name() + "' of length " +
                                                      std::to_string(s.size()) + " " + std::to_string(order) +
                                                      " times");
    }
    std::vector<double> v(s.values().begin(), s.values().end());
    for (int k = 0; k < order; ++k) {
        for (std::size_t t = v.size() - 1; t > 0; --t) v[t] -= v[t - 1];
        v.erase(v.begin());
    }
    return Series(s.name(), s.start_year() + order, std::move(v));
}

/// Inverse of a first difference given the level preceding the differenced sample.
inline Series cumulate(const Series& d, double initial) {
    std::vector<double> v;
    v.reserve(d.size() + 1);
    v.push_back(initial);
    for (double x : d.values()) v.push_back(v.back() + x);
    return Series(d.name(), d.start_year() - 1, std::move(v));
}

inline Series natural_log(const Series& s) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0)) {
            throw Error(ErrorKind::domain, "log of non-positive value " + std::to_string(s[i]) + " in '" +
                                               s.name() + "' at year " +
                                               std::to_string(s.start_year() + static_cast<int>(i)));
        }
        v[i] = std::log(s[i]);
    }
    return Series(s.name(), s.start_year(), std::move(v));
}

/// Truncate every series to the intersection of their samples.
inline Dataset align(const std::vector<Series>& series_list) {
    if (series_list.size() < 2) throw Error(ErrorKind::alignment, "alignment needs at least two series");
    int first = series_list[0].start_year();
    int last = series_list[0].end_year();
    for (const auto& s : series_list) {
        first = std::max(first, s.start_year());
        last = std::min(last, s.end_year());
    }
    if (first > last) throw Error(ErrorKind::alignment, "series samples do not overlap");
    std::vector<Series> out;
    out.reserve(series_list.size());
    for (const auto& s : series_list) out.push_back(s.slice(first, last));
    return Dataset(std::move(out));
}

}  // namespace tsecon
