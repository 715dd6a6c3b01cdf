#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schurent/detail/text.hpp"
#include "schurent/errors.hpp"

namespace schurent {

/// Coefficients (a_1, ..., a_n) of a weighted sum sum_i a_i X_i.
class WeightVector {
  public:
    WeightVector() = default;
    WeightVector(std::initializer_list<double> entries) : WeightVector(std::vector<double>(entries)) {}
    explicit WeightVector(std::vector<double> entries) : entries_(std::move(entries)) {
        for (double e : entries_) {
            if (!std::isfinite(e)) {
                throw ParameterDomainError("weight entries must be finite");
            }
        }
    }

    /// Comma-separated decimals, e.g. "1,1" or "0.4,0.3,0.3".
    static WeightVector parse(std::string_view text) {
        auto entries = detail::parse_double_list(text);
        if (entries.empty()) {
            throw ParameterDomainError("empty weight vector");
        }
        return WeightVector(std::move(entries));
    }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const noexcept { return entries_; }
    const std::vector<double>& vec() const noexcept { return entries_; }

    double sum() const { return std::accumulate(entries_.begin(), entries_.end(), 0.0); }
    double mean() const { return entries_.empty() ? 0.0 : sum() / static_cast<double>(entries_.size()); }
    double sum_of_squares() const {
        return std::inner_product(entries_.begin(), entries_.end(), entries_.begin(), 0.0);
    }
    double max_abs() const {
        double m = 0.0;
        for (double e : entries_) {
            m = std::max(m, std::abs(e));
        }
        return m;
    }
    bool all_zero() const {
        return std::all_of(entries_.begin(), entries_.end(), [](double e) { return e == 0.0; });
    }
    bool mixed_sign() const {
        const bool pos = std::any_of(entries_.begin(), entries_.end(), [](double e) { return e > 0.0; });
        const bool neg = std::any_of(entries_.begin(), entries_.end(), [](double e) { return e < 0.0; });
        return pos && neg;
    }

    std::string to_string() const { return detail::join_shortest(entries_); }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

  private:
    std::vector<double> entries_;
};

} // namespace schurent
