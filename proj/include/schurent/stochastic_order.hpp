#pragma once

// Numeric checks of the convex order X <=_cx Y and of the two inequality
// chains that turn it into entropy comparisons when Y is log-concave:
//
//   H(Y) >= -int f log g >= H(X)
//   G_a(Y) >= (int f g^{a-1})^a (int g^a)^{1-a} >= G_a(X),   0 < a < 1
//
// with f, g the densities of X, Y.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "schurent/density_grid.hpp"
#include "schurent/entropy.hpp"
#include "schurent/errors.hpp"

namespace schurent {

/// t -> E(X - t)_+ for the piecewise-constant density of a grid; O(1) per query
/// after an O(n) suffix-sum pass.
class StopLossTransform {
  public:
    explicit StopLossTransform(const DensityGrid& g) : g_(&g), mass_suffix_(g.size() + 1, 0.0), moment_suffix_(g.size() + 1, 0.0) {
        for (std::size_t i = g.size(); i-- > 0;) {
            mass_suffix_[i] = mass_suffix_[i + 1] + g.mass(i);
            moment_suffix_[i] = moment_suffix_[i + 1] + g.mass(i) * g.x(i);
        }
    }

    double operator()(double t) const {
        const DensityGrid& g = *g_;
        const double h = g.step();
        const double lo = g.lower_edge();
        if (t <= lo) {
            return moment_suffix_[0] - t * mass_suffix_[0];
        }
        if (t >= g.upper_edge()) {
            return 0.0;
        }
        auto k = static_cast<std::size_t>((t - lo) / h);
        k = std::min(k, g.size() - 1);
        const double right = lo + h * static_cast<double>(k + 1);
        // Cell k is cut at t: int_t^right (x - t) v dx.
        const double partial = 0.5 * g.value(k) * (right - t) * (right - t);
        const double tail = moment_suffix_[k + 1] - t * mass_suffix_[k + 1];
        return partial + std::max(tail, 0.0);
    }

  private:
    const DensityGrid* g_;
    std::vector<double> mass_suffix_;
    std::vector<double> moment_suffix_;
};

/// E(X - t)_+.
inline double stop_loss(const DensityGrid& g, double t) { return StopLossTransform(g)(t); }

/// E phi(X) integrated over each cell with 3-point Gauss-Legendre (exact for
/// polynomials up to degree 5 against the piecewise-constant density).
template <class Phi>
double expectation(const DensityGrid& g, Phi&& phi) {
    static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr std::array<double, 3> weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    const double half = 0.5 * g.step();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = g.value(i);
        if (v == 0.0) {
            continue;
        }
        double cell = 0.0;
        for (std::size_t q = 0; q < 3; ++q) {
            cell += weights[q] * phi(g.x(i) + half * nodes[q]);
        }
        s += v * cell;
    }
    return s * g.step();
}

enum class Verdict { pass, fail, inconclusive };

inline std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct ConvexOrderTolerance {
    double mean = 1e-6;
    double margin = 1e-5;
};

struct TestFunctionMargin {
    std::string tag;
    double margin = 0.0; // E phi(Y) - E phi(X)
};

struct ConvexOrderReport {
    bool means_equal = false;
    double mean_gap = 0.0; // E Y - E X
    double stop_loss_margin = 0.0; // min over the ladder
    double stop_loss_argmin = 0.0;
    std::size_t ladder_points = 0;
    std::vector<TestFunctionMargin> test_function_margins;
    Verdict verdict = Verdict::fail;
};

namespace detail {

inline std::pair<double, double> ladder_min(const StopLossTransform& sx, const StopLossTransform& sy, double lo,
                                            double hi, std::size_t points, double tol, bool& near_zero) {
    double worst = std::numeric_limits<double>::infinity();
    double argmin = lo;
    near_zero = false;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double m = sy(t) - sx(t);
        if (std::abs(m) <= tol) {
            near_zero = true;
        }
        if (m < worst) {
            worst = m;
            argmin = t;
        }
    }
    return {worst, argmin};
}

} // namespace detail

/// X <=_cx Y by equal means plus stop-loss dominance on a 101-point t-ladder
/// spanning both grids (1001 points when some margin falls within +-tol of 0).
/// The battery x^2, |x|, x^4, e^{x/4}, (x-m)^2 is supporting evidence: if it
/// disagrees with a passing stop-loss test the verdict is inconclusive.
inline ConvexOrderReport convex_order_check(const DensityGrid& gx, const DensityGrid& gy, ConvexOrderTolerance tol) {
    ConvexOrderReport r;
    const double mx = gx.mean();
    const double my = gy.mean();
    r.mean_gap = my - mx;
    r.means_equal = std::abs(r.mean_gap) <= tol.mean;

    const StopLossTransform sx(gx);
    const StopLossTransform sy(gy);
    const double lo = std::min(gx.lower_edge(), gy.lower_edge());
    const double hi = std::max(gx.upper_edge(), gy.upper_edge());
    bool near_zero = false;
    r.ladder_points = 101;
    auto [worst, argmin] = detail::ladder_min(sx, sy, lo, hi, r.ladder_points, tol.margin, near_zero);
    if (near_zero) {
        r.ladder_points = 1001;
        std::tie(worst, argmin) = detail::ladder_min(sx, sy, lo, hi, r.ladder_points, tol.margin, near_zero);
    }
    r.stop_loss_margin = worst;
    r.stop_loss_argmin = argmin;

    const double m = 0.5 * (mx + my);
    const std::array<std::pair<const char*, std::function<double(double)>>, 5> battery{{
        {"x^2", [](double x) { return x * x; }},
        {"|x|", [](double x) { return std::abs(x); }},
        {"x^4", [](double x) { return x * x * x * x; }},
        {"exp(x/4)", [](double x) { return std::exp(0.25 * x); }},
        {"(x-m)^2", [m](double x) { return (x - m) * (x - m); }},
    }};
    bool battery_ok = true;
    for (const auto& [tag, phi] : battery) {
        const double ey = expectation(gy, phi);
        const double ex = expectation(gx, phi);
        r.test_function_margins.push_back({tag, ey - ex});
        if (ey - ex < -tol.margin * std::max(1.0, std::abs(ey))) {
            battery_ok = false;
        }
    }

    if (!r.means_equal || r.stop_loss_margin < -tol.margin) {
        r.verdict = Verdict::fail;
    } else {
        r.verdict = battery_ok ? Verdict::pass : Verdict::inconclusive;
    }
    return r;
}

inline ConvexOrderReport convex_order_check(const DensityGrid& gx, const DensityGrid& gy, double tol) {
    return convex_order_check(gx, gy, ConvexOrderTolerance{tol, tol});
}

/// Both grids on one lattice: the finer grid's cells, widened to cover both
/// windows. The finer grid is only zero-padded; the other is resampled.
inline std::pair<DensityGrid, DensityGrid> align_grids(const DensityGrid& gx, const DensityGrid& gy) {
    const bool x_is_ref = gx.step() < gy.step() && !detail::same_step(gx.step(), gy.step());
    const DensityGrid& ref = x_is_ref ? gx : gy;
    const DensityGrid& other = x_is_ref ? gy : gx;
    const double h = ref.step();
    const double lo = std::min(ref.lower_edge(), other.lower_edge());
    const double hi = std::max(ref.upper_edge(), other.upper_edge());
    const auto before = static_cast<std::ptrdiff_t>(std::ceil((ref.lower_edge() - lo) / h - 1e-9));
    const auto after = static_cast<std::ptrdiff_t>(std::ceil((hi - ref.upper_edge()) / h - 1e-9));
    const std::size_t count = ref.size() + static_cast<std::size_t>(before + after);
    const double origin = ref.origin() - h * static_cast<double>(before);

    std::vector<double> padded(count, 0.0);
    std::copy(ref.values().begin(), ref.values().end(), padded.begin() + before);
    DensityGrid ref_aligned(origin, h, std::move(padded), ref.normalization_tol());
    DensityGrid other_aligned = resample(other, origin, h, count);
    if (x_is_ref) {
        return {std::move(ref_aligned), std::move(other_aligned)};
    }
    return {std::move(other_aligned), std::move(ref_aligned)};
}

struct Lemma1Options {
    /// f mass allowed where g vanishes before the check is refused.
    double support_mass_tol = 1e-8;
    ConvexOrderTolerance convex{1e-6, 1e-5};
};

struct HolderMargins {
    double alpha = 0.5;
    Estimate g_y;    // G_a(Y)
    Estimate middle; // (int f g^{a-1})^a (int g^a)^{1-a}
    Estimate g_x;    // G_a(X)
    double upper_margin = 0.0; // G_a(Y) - middle
    double lower_margin = 0.0; // middle - G_a(X)
    bool pass = false;
};

struct Lemma1Report {
    EntropyEstimate h_y;
    Estimate cross; // -int f log g over supp(g)
    EntropyEstimate h_x;
    double jensen_upper_margin = 0.0; // H(Y) - cross
    double jensen_lower_margin = 0.0; // cross - H(X)
    bool jensen_pass = false;
    std::vector<HolderMargins> holder;
    double mass_outside_support = 0.0;
    bool y_log_concave = false;
    ConvexOrderReport convex_order;
    bool preconditions_met = false;
    bool pass = false;
    /// Smallest margin after adding its error allowance (>= 0 when every link holds).
    double worst_slack = 0.0;
};

namespace detail {

inline double cross_entropy_sum(const DensityGrid& f, const DensityGrid& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double gv = g.value(i);
        const double fv = f.value(i);
        if (gv > kDensityFloor && fv > 0.0) {
            s -= fv * std::log(gv);
        }
    }
    return s * f.step();
}

inline double tilted_power_sum(const DensityGrid& f, const DensityGrid& g, double alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double gv = g.value(i);
        const double fv = f.value(i);
        if (gv > kDensityFloor && fv > 0.0) {
            s += fv * std::pow(gv, alpha - 1.0);
        }
    }
    return s * f.step();
}

} // namespace detail

/// Evaluates both chains with every margin and its quadrature error bound.
/// Throws SupportViolationError when f puts more than support_mass_tol of
/// mass where g vanishes.
inline Lemma1Report lemma1_chain_check(const DensityGrid& gx, const DensityGrid& gy, const std::vector<double>& alphas,
                                       const Lemma1Options& opts = {}) {
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) {
            throw ParameterDomainError("lemma1_chain_check: alphas must lie in (0, 1)");
        }
    }
    Lemma1Report r;
    r.convex_order = convex_order_check(gx, gy, opts.convex);
    r.y_log_concave = log_concavity_check(gy).log_concave;
    r.preconditions_met = r.convex_order.verdict == Verdict::pass && r.y_log_concave;

    const auto [f, g] = align_grids(gx, gy);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(g.value(i) > kDensityFloor)) {
            r.mass_outside_support += f.mass(i);
        }
    }
    if (r.mass_outside_support > opts.support_mass_tol) {
        throw SupportViolationError("f carries mass " + detail::format_shortest(r.mass_outside_support) +
                                    " outside supp(g)");
    }

    r.h_y = shannon_entropy(g);
    r.h_x = shannon_entropy(f);
    r.cross = detail::refine(f, g, detail::cross_entropy_sum);
    r.jensen_upper_margin = r.h_y.value - r.cross.value;
    r.jensen_lower_margin = r.cross.value - r.h_x.value;
    const double up_slack = r.jensen_upper_margin + r.h_y.error_bound + r.cross.error_bound;
    const double lo_slack = r.jensen_lower_margin + r.cross.error_bound + r.h_x.error_bound;
    r.jensen_pass = up_slack >= 0.0 && lo_slack >= 0.0;
    r.worst_slack = std::min(up_slack, lo_slack);

    bool holder_ok = true;
    for (double alpha : alphas) {
        HolderMargins hm;
        hm.alpha = alpha;
        hm.g_y = g_alpha_estimate(g, alpha);
        hm.g_x = g_alpha_estimate(f, alpha);
        const Estimate tilted = detail::refine(
            f, g, [alpha](const DensityGrid& a, const DensityGrid& b) { return detail::tilted_power_sum(a, b, alpha); });
        const double mid = std::pow(tilted.value, alpha) * std::pow(hm.g_y.value, 1.0 - alpha);
        const double rel = alpha * tilted.error_bound / tilted.value + (1.0 - alpha) * hm.g_y.error_bound / hm.g_y.value;
        hm.middle = {mid, mid * rel};
        hm.upper_margin = hm.g_y.value - mid;
        hm.lower_margin = mid - hm.g_x.value;
        const double up = hm.upper_margin + hm.g_y.error_bound + hm.middle.error_bound;
        const double lo = hm.lower_margin + hm.middle.error_bound + hm.g_x.error_bound;
        hm.pass = up >= 0.0 && lo >= 0.0;
        holder_ok = holder_ok && hm.pass;
        r.worst_slack = std::min({r.worst_slack, up, lo});
        r.holder.push_back(hm);
    }
    r.pass = r.preconditions_met && r.jensen_pass && holder_ok;
    return r;
}

} // namespace schurent
