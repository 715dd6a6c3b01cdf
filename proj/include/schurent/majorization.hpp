#pragma once

// Majorization a < b (a is "more uniform" than b): equal sums and dominated
// descending prefix sums, certified by a doubly stochastic T with T b = a.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include "schurent/detail/text.hpp"
#include "schurent/errors.hpp"
#include "schurent/weights.hpp"

namespace schurent {

/// Deterministic 64-bit generator with a platform-independent unit draw.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// splitmix64 finalizer.
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// Default predicate tolerance: 1e-12 scaled by max(1, |b|_inf).
inline double majorization_tol(const WeightVector& b) { return 1e-12 * std::max(1.0, b.max_abs()); }

namespace detail {

// Indices ordering v descending; ties keep the original index order.
inline std::vector<std::size_t> descending_order(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
    return idx;
}

inline std::vector<double> sorted_descending(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    std::stable_sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace detail

/// a < b: true iff sum a = sum b and every descending k-prefix sum of a is at
/// most that of b, all within tol.
inline bool majorizes(const WeightVector& a, const WeightVector& b, double tol) {
    if (a.size() != b.size()) {
        throw DimensionError("majorizes: vectors have different lengths");
    }
    if (!(tol >= 0.0)) {
        throw ParameterDomainError("majorizes: tol must be >= 0");
    }
    const auto sa = detail::sorted_descending(a.entries());
    const auto sb = detail::sorted_descending(b.entries());
    double pa = 0.0;
    double pb = 0.0;
    for (std::size_t k = 0; k < sa.size(); ++k) {
        pa += sa[k];
        pb += sb[k];
        if (pa > pb + tol) {
            return false;
        }
    }
    return std::abs(pa - pb) <= tol;
}

inline bool majorizes(const WeightVector& a, const WeightVector& b) { return majorizes(a, b, majorization_tol(b)); }

/// n x n nonnegative matrix, row-major.
class TransferMatrix {
  public:
    explicit TransferMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    static TransferMatrix identity(std::size_t n) {
        TransferMatrix t(n);
        for (std::size_t i = 0; i < n; ++i) {
            t(i, i) = 1.0;
        }
        return t;
    }

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::vector<double> apply(std::span<const double> v) const {
        if (v.size() != n_) {
            throw DimensionError("TransferMatrix::apply: dimension mismatch");
        }
        std::vector<double> out(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                out[i] += (*this)(i, j) * v[j];
            }
        }
        return out;
    }

    /// max over rows and columns of |sum - 1|.
    double stochastic_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double row = 0.0;
            double col = 0.0;
            for (std::size_t j = 0; j < n_; ++j) {
                row += (*this)(i, j);
                col += (*this)(j, i);
            }
            worst = std::max({worst, std::abs(row - 1.0), std::abs(col - 1.0)});
        }
        return worst;
    }

    bool nonnegative() const {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return x >= 0.0; });
    }

    bool is_doubly_stochastic(double tol = 1e-12) const { return nonnegative() && stochastic_defect() <= tol; }

    std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * n_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_));
        }
        return out;
    }

  private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Doubly stochastic T with T b = a, built as a product of at most n - 1
/// T-transforms on the sorted vectors (Hardy-Littlewood-Polya reduction): at
/// each step the last coordinate with a surplus over the target gives to the
/// first later coordinate with a deficit, closing one of the two gaps exactly.
inline TransferMatrix transfer_certificate(const WeightVector& a, const WeightVector& b) {
    if (a.size() != b.size()) {
        throw DimensionError("transfer_certificate: vectors have different lengths");
    }
    const double tol = majorization_tol(b);
    if (!majorizes(a, b, tol)) {
        throw OrderError("transfer_certificate: a is not majorized by b");
    }
    const std::size_t n = a.size();
    const auto pa = detail::descending_order(a.entries());
    const auto pb = detail::descending_order(b.entries());
    std::vector<double> target(n), x(n);
    for (std::size_t r = 0; r < n; ++r) {
        target[r] = a[pa[r]];
        x[r] = b[pb[r]];
    }

    // x = M * sorted(b) throughout.
    TransferMatrix m = TransferMatrix::identity(n);
    for (std::size_t step = 0; step < 4 * n; ++step) {
        std::size_t j = n;
        for (std::size_t i = n; i-- > 0;) {
            if (x[i] - target[i] > tol) {
                j = i;
                break;
            }
        }
        if (j == n) {
            break;
        }
        std::size_t k = n;
        for (std::size_t i = j + 1; i < n; ++i) {
            if (target[i] - x[i] > tol) {
                k = i;
                break;
            }
        }
        if (k == n) {
            break; // remaining surplus is below tolerance
        }
        const double surplus = x[j] - target[j];
        const double deficit = target[k] - x[k];
        const double delta = std::min(surplus, deficit);
        const double moved = delta / (x[j] - x[k]); // 1 - lambda
        const double keep = 1.0 - moved;
        for (std::size_t c = 0; c < n; ++c) {
            const double rj = m(j, c);
            const double rk = m(k, c);
            m(j, c) = keep * rj + moved * rk;
            m(k, c) = keep * rk + moved * rj;
        }
        if (surplus <= deficit) {
            x[j] = target[j];
            x[k] += delta;
        } else {
            x[k] = target[k];
            x[j] -= delta;
        }
    }

    TransferMatrix t(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            t(pa[r], pb[c]) = m(r, c);
        }
    }
    return t;
}

/// Applies x_i, x_j <- lambda x_i + (1-lambda) x_j, lambda x_j + (1-lambda) x_i.
inline void apply_t_transform(std::vector<double>& x, std::size_t i, std::size_t j, double lambda) {
    const double xi = x[i];
    const double xj = x[j];
    x[i] = lambda * xi + (1.0 - lambda) * xj;
    x[j] = lambda * xj + (1.0 - lambda) * xi;
}

/// b with entries uniform on [-1, 2]; a = b after 1-3 random T-transforms.
/// Guarantees a < b and a != b; deterministic in seed.
inline std::pair<WeightVector, WeightVector> random_majorization_pair(std::size_t n, std::uint64_t seed) {
    if (n < 2) {
        throw ParameterDomainError("random_majorization_pair: n must be >= 2");
    }
    Rng rng(seed);
    while (true) {
        std::vector<double> b(n);
        for (double& v : b) {
            v = rng.uniform(-1.0, 2.0);
        }
        std::vector<double> a = b;
        const std::size_t transforms = 1 + rng.index(3);
        for (std::size_t t = 0; t < transforms; ++t) {
            const std::size_t i = rng.index(n);
            std::size_t j = rng.index(n - 1);
            if (j >= i) {
                ++j;
            }
            apply_t_transform(a, i, j, rng.uniform(0.05, 0.95));
        }
        WeightVector wa(std::move(a));
        WeightVector wb(std::move(b));
        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gap = std::max(gap, std::abs(wa[i] - wb[i]));
        }
        if (gap > 1e-9 && majorizes(wa, wb)) {
            return {std::move(wa), std::move(wb)};
        }
    }
}

/// v_0 = b, ..., v_steps = (mean, ..., mean), v_{k+1} < v_k. Each step moves
/// every coordinate the same fraction of the way to the mean, i.e.
/// v_{k+1} = ((1-s) I + s J/n) v_k, a doubly stochastic image.
inline std::vector<WeightVector> majorization_chain(const WeightVector& b, std::size_t steps) {
    if (steps < 1) {
        throw ParameterDomainError("majorization_chain: steps must be >= 1");
    }
    const double mean = b.mean();
    std::vector<WeightVector> chain;
    chain.reserve(steps + 1);
    chain.push_back(b);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps);
        std::vector<double> v(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            v[i] = k == steps ? mean : (1.0 - t) * b[i] + t * mean;
        }
        chain.emplace_back(std::move(v));
    }
    return chain;
}

/// One vector per row, 17 significant digits.
inline void write_chain_csv(const std::vector<WeightVector>& chain, std::ostream& os) {
    for (const auto& v : chain) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            os << (i ? "," : "") << detail::format_17g(v[i]);
        }
        os << '\n';
    }
}

} // namespace schurent
