#pragma once

// Uniform-step numeric densities.
//
// A DensityGrid stores cell averages: values[i] is the mean density over the
// cell [x_i - h/2, x_i + h/2] centred at x_i = origin + i*h. Cell masses are
// values[i] * h and sum to 1. Cell averages stay finite next to integrable
// singularities (gamma with shape < 1), and the representation is closed
// under scaling, discrete convolution and merging of adjacent cells.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "schurent/detail/text.hpp"
#include "schurent/dist_catalog.hpp"
#include "schurent/errors.hpp"
#include "schurent/weights.hpp"

namespace schurent {

/// Values below this are treated as zero by every log-based integrand.
inline constexpr double kDensityFloor = 1e-300;

/// FFT round-off level relative to the peak; convolution output below it is zeroed.
inline constexpr double kFftNoiseFloor = 1e-14;

/// Minimum number of cells in a grid.
inline constexpr std::size_t kMinGridPoints = 8;

struct GridConfig {
    std::size_t points_per_grid = std::size_t{1} << 14;
    /// Each factor's window keeps at least 1 - tail_mass_tol of its mass.
    double tail_mass_tol = 1e-16;
    double normalization_tol = 1e-6;

    void validate() const {
        const bool pow2 = points_per_grid != 0 && (points_per_grid & (points_per_grid - 1)) == 0;
        if (!pow2 || points_per_grid < (std::size_t{1} << 8)) {
            throw ParameterDomainError("points_per_grid must be a power of two >= 256");
        }
        if (!(tail_mass_tol > 0.0 && tail_mass_tol < 1e-3)) {
            throw ParameterDomainError("tail_mass_tol must lie in (0, 1e-3)");
        }
        if (!(normalization_tol > 0.0)) {
            throw ParameterDomainError("normalization_tol must be > 0");
        }
    }
};

class DensityGrid {
  public:
    /// Takes cell averages that already integrate to 1 within normalization_tol.
    DensityGrid(double origin, double step, std::vector<double> values, double normalization_tol = 1e-6)
        : origin_(origin), step_(step), values_(std::move(values)), normalization_tol_(normalization_tol) {
        if (!(std::isfinite(step_) && step_ > 0.0) || !std::isfinite(origin_)) {
            throw GridIncompatibilityError("grid step must be finite and > 0");
        }
        if (values_.size() < kMinGridPoints) {
            throw GridIncompatibilityError("grid needs at least 8 points");
        }
        for (double v : values_) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw GridIncompatibilityError("grid values must be finite and >= 0");
            }
        }
        if (std::abs(integral() - 1.0) > normalization_tol_) {
            throw GridIncompatibilityError("grid integral " + detail::format_shortest(integral()) +
                                           " is not 1 within tolerance");
        }
    }

    /// Clamps negatives to zero, pads to the minimum size and rescales to unit mass.
    static DensityGrid normalized(double origin, double step, std::vector<double> values,
                                  double normalization_tol = 1e-6) {
        for (double& v : values) {
            if (!(v > 0.0)) {
                v = 0.0;
            }
        }
        if (values.size() < kMinGridPoints) {
            values.resize(kMinGridPoints, 0.0);
        }
        double mass = 0.0;
        for (double v : values) {
            mass += v;
        }
        mass *= step;
        if (!(mass > 0.0) || !std::isfinite(mass)) {
            throw GridIncompatibilityError("grid has no mass to normalize");
        }
        for (double& v : values) {
            v /= mass;
        }
        return DensityGrid(origin, step, std::move(values), normalization_tol);
    }

    double origin() const noexcept { return origin_; }
    double step() const noexcept { return step_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double normalization_tol() const noexcept { return normalization_tol_; }

    double x(std::size_t i) const noexcept { return origin_ + step_ * static_cast<double>(i); }
    double value(std::size_t i) const { return values_[i]; }
    double mass(std::size_t i) const { return values_[i] * step_; }
    double lower_edge() const noexcept { return origin_ - 0.5 * step_; }
    double upper_edge() const noexcept { return x(values_.size() - 1) + 0.5 * step_; }

    /// Total mass (sum of cell masses).
    double integral() const noexcept {
        double s = 0.0;
        for (double v : values_) {
            s += v;
        }
        return s * step_;
    }

    double mean() const noexcept {
        double s = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            s += x(i) * values_[i];
        }
        return s * step_;
    }

    /// Variance of the piecewise-constant density (includes the within-cell h^2/12).
    double variance() const noexcept {
        const double m = mean();
        double s = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double d = x(i) - m;
            s += d * d * values_[i];
        }
        return s * step_ + step_ * step_ / 12.0;
    }

    double max_value() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

  private:
    double origin_;
    double step_;
    std::vector<double> values_;
    double normalization_tol_;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

// Linear (non-circular) convolution via real FFTs zero-padded to >= n1+n2-1.
inline std::vector<double> fft_linear_convolve(std::span<const double> a, std::span<const double> b) {
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = next_pow2(out_len);
    const std::size_t nc = n / 2 + 1;
    std::vector<double> ra(n, 0.0), rb(n, 0.0), out(n, 0.0);
    std::copy(a.begin(), a.end(), ra.begin());
    std::copy(b.begin(), b.end(), rb.begin());
    std::vector<std::complex<double>> ca(nc), cb(nc);
    auto* fa = reinterpret_cast<fftw_complex*>(ca.data());
    auto* fb = reinterpret_cast<fftw_complex*>(cb.data());

    fftw_plan pa, pb, pinv;
    {
        // Planner calls are not thread-safe; execution is.
        std::lock_guard lock(fftw_planner_mutex());
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra.data(), fa, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb.data(), fb, FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, out.data(), FFTW_ESTIMATE);
    }
    // FFTW_ESTIMATE planning leaves the inputs untouched.
    fftw_execute(pa);
    fftw_execute(pb);
    for (std::size_t k = 0; k < nc; ++k) {
        ca[k] *= cb[k];
    }
    fftw_execute(pinv);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pinv);
    }
    out.resize(out_len);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& v : out) {
        v *= inv_n;
    }
    return out;
}

inline bool same_step(double h1, double h2) { return std::abs(h1 - h2) <= 1e-9 * std::max(h1, h2); }

// Window [lo, hi] holding all but tail_mass_tol of the model's mass. Finite
// support endpoints are used as-is.
inline Interval quantile_window(const DensityModel& model, double tail_mass_tol) {
    const Interval s = model.support();
    Interval w;
    w.lo = s.lo_finite() ? s.lo : model.quantile(0.5 * tail_mass_tol);
    w.hi = s.hi_finite() ? s.hi : model.upper_quantile(0.5 * tail_mass_tol);
    if (!(std::isfinite(w.lo) && std::isfinite(w.hi) && w.hi > w.lo)) {
        throw DiscretizationError("could not bracket the mass window of " + model.tag());
    }
    const double kept = model.interval_mass(w.lo, w.hi);
    if (!(kept >= 1.0 - 2.0 * tail_mass_tol)) {
        throw DiscretizationError("window for " + model.tag() + " keeps only " + format_shortest(kept));
    }
    return w;
}

// Cells [lo + i*step, lo + (i+1)*step) covering [lo, hi], averaged analytically.
// The grid is then shifted by less than half a cell so that its mean equals
// the model's mean; entropies are unaffected by the shift.
inline DensityGrid discretize_window(const DensityModel& model, Interval window, double step,
                                     double normalization_tol) {
    const double width = window.hi - window.lo;
    auto count = static_cast<std::size_t>(std::ceil(width / step - 1e-9));
    count = std::max(count, kMinGridPoints);
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double a = window.lo + step * static_cast<double>(i);
        const double b = a + step;
        values[i] = model.interval_mass(a, b) / step;
    }
    DensityGrid g = DensityGrid::normalized(window.lo + 0.5 * step, step, std::move(values), normalization_tol);
    const double shift = model.mean() - g.mean();
    if (std::abs(shift) >= 0.5 * step) {
        return g;
    }
    return DensityGrid(g.origin() + shift, step, std::vector<double>(g.values().begin(), g.values().end()),
                       normalization_tol);
}

} // namespace detail

/// Grid of the model over its (1 - tail_mass_tol) quantile window with
/// points_per_grid cells.
inline DensityGrid discretize(const DensityModel& model, const GridConfig& cfg = {}) {
    cfg.validate();
    const Interval w = detail::quantile_window(model, cfg.tail_mass_tol);
    const double step = (w.hi - w.lo) / static_cast<double>(cfg.points_per_grid);
    return detail::discretize_window(model, w, step, cfg.normalization_tol);
}

/// Density of a*X given the grid of X. Origin and step scale by a; a < 0 reflects.
inline DensityGrid scale_weight(const DensityGrid& g, double a) {
    if (a == 0.0) {
        throw DegenerateWeightError("scale_weight: weight is zero");
    }
    if (!std::isfinite(a)) {
        throw ParameterDomainError("scale_weight: weight must be finite");
    }
    if (a == 1.0) {
        return g;
    }
    const double abs_a = std::abs(a);
    std::vector<double> v(g.values().begin(), g.values().end());
    for (double& x : v) {
        x /= abs_a;
    }
    if (a > 0.0) {
        return DensityGrid(a * g.origin(), abs_a * g.step(), std::move(v), g.normalization_tol());
    }
    std::reverse(v.begin(), v.end());
    return DensityGrid(a * g.x(g.size() - 1), abs_a * g.step(), std::move(v), g.normalization_tol());
}

/// Regrids onto cells centred at origin + j*step, j < count, by exact overlap
/// of the piecewise-constant density. Mass outside the new window is dropped.
inline DensityGrid resample(const DensityGrid& g, double origin, double step, std::size_t count) {
    if (!(step > 0.0) || count == 0) {
        throw ParameterDomainError("resample: step must be > 0 and count >= 1");
    }
    std::vector<double> out(count, 0.0);
    const double h = g.step();
    const double old_lo = g.lower_edge();
    const double new_lo = origin - 0.5 * step;
    std::size_t i = 0;
    for (std::size_t j = 0; j < count; ++j) {
        const double a = new_lo + step * static_cast<double>(j);
        const double b = a + step;
        // Advance past old cells ending before a.
        while (i < g.size() && old_lo + h * static_cast<double>(i + 1) <= a) {
            ++i;
        }
        double m = 0.0;
        for (std::size_t k = i; k < g.size(); ++k) {
            const double ca = old_lo + h * static_cast<double>(k);
            if (ca >= b) {
                break;
            }
            const double cb = ca + h;
            const double overlap = std::min(b, cb) - std::max(a, ca);
            if (overlap > 0.0) {
                m += overlap * g.value(k);
            }
        }
        out[j] = m / step;
    }
    return DensityGrid::normalized(origin, step, std::move(out), g.normalization_tol());
}

/// Same window, new step.
inline DensityGrid resample_to_step(const DensityGrid& g, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ParameterDomainError("resample_to_step: step must be > 0");
    }
    if (step == g.step()) {
        return g;
    }
    const double width = g.upper_edge() - g.lower_edge();
    const auto count = static_cast<std::size_t>(std::ceil(width / step - 1e-9));
    return resample(g, g.lower_edge() + 0.5 * step, step, std::max(count, std::size_t{1}));
}

/// Merges cell pairs (0,1), (2,3), ...: the same density at twice the step.
/// An odd trailing cell is paired with an empty one.
inline DensityGrid coarsen(const DensityGrid& g) {
    const std::size_t n = (g.size() + 1) / 2;
    std::vector<double> v(std::max(n, kMinGridPoints), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double right = 2 * k + 1 < g.size() ? g.value(2 * k + 1) : 0.0;
        v[k] = 0.5 * (g.value(2 * k) + right);
    }
    return DensityGrid::normalized(g.origin() + 0.5 * g.step(), 2.0 * g.step(), std::move(v),
                                   g.normalization_tol());
}

/// Density of X + Y for independent X ~ g1, Y ~ g2.
inline DensityGrid convolve(const DensityGrid& g1, const DensityGrid& g2, const GridConfig& cfg = {}) {
    const DensityGrid* a = &g1;
    const DensityGrid* b = &g2;
    std::optional<DensityGrid> resampled;
    if (!detail::same_step(a->step(), b->step())) {
        // Bring the coarser grid down to the finer step.
        if (a->step() < b->step()) {
            std::swap(a, b);
        }
        resampled = resample_to_step(*a, b->step());
        a = &*resampled;
    }
    if (!detail::same_step(a->step(), b->step())) {
        throw GridIncompatibilityError("convolve: grid steps differ after resampling");
    }
    const double h = b->step();
    // p[m] = sum_{i+j=m} mass products spreads over [m h, (m+2) h] relative to the
    // sum of the lower edges; half of it lands in each of the two cells there.
    const std::vector<double> p = detail::fft_linear_convolve(a->values(), b->values());
    std::vector<double> v(p.size() + 1, 0.0);
    double peak = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double left = k > 0 ? p[k - 1] : 0.0;
        const double right = k < p.size() ? p[k] : 0.0;
        v[k] = 0.5 * h * (left + right);
        peak = std::max(peak, v[k]);
    }
    const double cutoff = kFftNoiseFloor * peak;
    for (double& x : v) {
        if (x < cutoff) {
            x = 0.0;
        }
    }
    // Drop empty cells at both ends.
    std::size_t first = 0;
    while (first < v.size() && v[first] == 0.0) {
        ++first;
    }
    std::size_t last = v.size();
    while (last > first && v[last - 1] == 0.0) {
        --last;
    }
    if (last - first < kMinGridPoints) {
        last = std::min(v.size(), first + kMinGridPoints);
        first = last - std::min(v.size(), kMinGridPoints);
    }
    std::vector<double> kept(v.begin() + static_cast<std::ptrdiff_t>(first),
                             v.begin() + static_cast<std::ptrdiff_t>(last));
    const double origin = a->lower_edge() + b->lower_edge() + h * (0.5 + static_cast<double>(first));
    return DensityGrid::normalized(origin, h, std::move(kept), cfg.normalization_tol);
}

/// Density of sum_i a_i X_i with X_i i.i.d. from the model. Zero weights are
/// dropped; every remaining factor is discretized so that after scaling it
/// lands on the common step max|a| * window / points_per_grid.
inline DensityGrid weighted_sum_density(const DensityModel& model, const WeightVector& weights,
                                        const GridConfig& cfg = {}, std::optional<double> step = std::nullopt) {
    cfg.validate();
    std::vector<double> nz;
    for (double a : weights.entries()) {
        if (a != 0.0) {
            nz.push_back(a);
        }
    }
    if (nz.empty()) {
        throw DegenerateSumError("all weights are zero: the sum is degenerate (H = -inf)");
    }
    // Canonical order makes the fold independent of the input permutation.
    std::stable_sort(nz.begin(), nz.end(), [](double x, double y) {
        return std::abs(x) != std::abs(y) ? std::abs(x) > std::abs(y) : x > y;
    });
    const Interval w = detail::quantile_window(model, cfg.tail_mass_tol);
    const double h = step.value_or(std::abs(nz.front()) * (w.hi - w.lo) / static_cast<double>(cfg.points_per_grid));
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ParameterDomainError("weighted_sum_density: step must be > 0");
    }
    std::optional<DensityGrid> acc;
    for (double a : nz) {
        DensityGrid factor = scale_weight(detail::discretize_window(model, w, h / std::abs(a), cfg.normalization_tol), a);
        acc = acc ? convolve(*acc, factor, cfg) : std::move(factor);
    }
    return *acc;
}

struct LogConcavityResult {
    bool log_concave = true;
    /// Grid coordinate of the first offending point.
    std::optional<double> first_violation;
    /// Largest second difference of log values seen (positive means convex somewhere).
    double max_second_difference = -std::numeric_limits<double>::infinity();
};

inline constexpr double kLogConcavityEps = 1e-7;
inline constexpr double kLogConcavityRelFloor = 1e-7;

/// log v[i-1] - 2 log v[i] + log v[i+1] <= eps at every interior point whose
/// three values clear max(1e-300, rel_floor * peak). The relative floor keeps
/// FFT round-off in far tails out of the test.
inline LogConcavityResult log_concavity_check(const DensityGrid& g, double eps = kLogConcavityEps,
                                              double rel_floor = kLogConcavityRelFloor) {
    LogConcavityResult r;
    const double floor = std::max(kDensityFloor, rel_floor * g.max_value());
    const auto v = g.values();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i - 1] < floor || v[i] < floor || v[i + 1] < floor) {
            continue;
        }
        const double d2 = std::log(v[i - 1]) - 2.0 * std::log(v[i]) + std::log(v[i + 1]);
        r.max_second_difference = std::max(r.max_second_difference, d2);
        if (d2 > eps && r.log_concave) {
            r.log_concave = false;
            r.first_violation = g.x(i);
        }
    }
    return r;
}

/// CSV with header "x,density", 17 significant digits.
inline void write_grid_csv(const DensityGrid& g, std::ostream& os) {
    os << "x,density\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << detail::format_17g(g.x(i)) << ',' << detail::format_17g(g.value(i)) << '\n';
    }
}

/// L1 distance between the grid and a reference density sampled at cell centres.
template <class Density>
double l1_distance(const DensityGrid& g, Density&& reference) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        s += std::abs(g.value(i) - reference(g.x(i)));
    }
    return s * g.step();
}

} // namespace schurent
