#pragma once

// Shannon entropy H = -int f log f and the Renyi functionals
// G_alpha = int f^alpha, H_alpha = log(G_alpha) / (1 - alpha) on density grids.
//
// Every integral is evaluated on the grid, on the grid with merged cell pairs
// (step 2h) and with merged quadruples (step 4h). The step-h value is
// Richardson-extrapolated with the observed convergence ratio, and
// |I(h) - I(2h)| is reported as the error bound. The observed ratio covers
// both smooth densities (order 2) and edge singularities such as
// x^{-1/2} (order 1/2).

#include <cmath>
#include <limits>
#include <utility>

#include "schurent/density_grid.hpp"
#include "schurent/errors.hpp"

namespace schurent {

/// Sentinel alpha that selects Shannon entropy.
inline constexpr double kShannonAlpha = 1.0;

/// |alpha - 1| below this delegates H_alpha to the Shannon estimator.
inline constexpr double kShannonDelegation = 1e-6;

struct Estimate {
    double value = 0.0;
    double error_bound = 0.0;
};

struct EntropyEstimate {
    double value = 0.0; // nats; -inf for degenerate input
    double alpha = kShannonAlpha;
    double error_bound = 0.0;

    bool degenerate() const noexcept { return std::isinf(value) && value < 0.0; }
};

/// H = H_alpha = -inf: the convention for point masses.
inline EntropyEstimate degenerate_entropy(double alpha = kShannonAlpha) {
    return {-std::numeric_limits<double>::infinity(), alpha, 0.0};
}

namespace detail {

// Step-halving refinement of a grid functional I(h).
inline Estimate richardson(double fine, double mid, double coarse) {
    const double d_fine = fine - mid;
    const double d_coarse = mid - coarse;
    Estimate e{fine, std::abs(d_fine)};
    if (std::abs(d_fine) <= 1e-14 * (1.0 + std::abs(fine))) {
        return e;
    }
    const double ratio = d_coarse / d_fine;
    // Orders between 1/5 and 4.
    if (ratio >= 1.148 && ratio <= 16.5) {
        e.value = fine + d_fine / (ratio - 1.0);
    }
    return e;
}

template <class Functional>
Estimate refine(const DensityGrid& g, Functional&& functional) {
    const DensityGrid g2 = coarsen(g);
    const DensityGrid g4 = coarsen(g2);
    return richardson(functional(g), functional(g2), functional(g4));
}

template <class Functional>
Estimate refine(const DensityGrid& f, const DensityGrid& g, Functional&& functional) {
    const DensityGrid f2 = coarsen(f);
    const DensityGrid g2 = coarsen(g);
    return richardson(functional(f, g), functional(f2, g2), functional(coarsen(f2), coarsen(g2)));
}

inline double neg_v_log_v_sum(const DensityGrid& g) {
    double s = 0.0;
    for (double v : g.values()) {
        if (v > kDensityFloor) {
            s -= v * std::log(v);
        }
    }
    return s * g.step();
}

inline double power_sum(const DensityGrid& g, double alpha) {
    double s = 0.0;
    for (double v : g.values()) {
        if (v > kDensityFloor) {
            s += std::pow(v, alpha);
        }
    }
    return s * g.step();
}

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ParameterDomainError("alpha must be finite and > 0");
    }
}

} // namespace detail

/// -int f log f with 0 log 0 = 0.
inline EntropyEstimate shannon_entropy(const DensityGrid& g) {
    const Estimate e = detail::refine(g, detail::neg_v_log_v_sum);
    return {e.value, kShannonAlpha, e.error_bound};
}

/// int f^alpha with its step-halving error bound.
inline Estimate g_alpha_estimate(const DensityGrid& g, double alpha) {
    detail::check_alpha(alpha);
    return detail::refine(g, [alpha](const DensityGrid& h) { return detail::power_sum(h, alpha); });
}

/// int f^alpha (> 0). alpha >= 1 is allowed for exploration.
inline double g_alpha(const DensityGrid& g, double alpha) { return g_alpha_estimate(g, alpha).value; }

/// log(G_alpha) / (1 - alpha); the Shannon value when alpha is within 1e-6 of 1.
inline EntropyEstimate renyi_entropy(const DensityGrid& g, double alpha) {
    detail::check_alpha(alpha);
    if (std::abs(alpha - 1.0) < kShannonDelegation) {
        EntropyEstimate e = shannon_entropy(g);
        e.alpha = alpha;
        return e;
    }
    const DensityGrid g2 = coarsen(g);
    const double fine = detail::power_sum(g, alpha);
    const double mid = detail::power_sum(g2, alpha);
    const Estimate G = detail::richardson(fine, mid, detail::power_sum(coarsen(g2), alpha));
    const double scale = 1.0 / (1.0 - alpha);
    return {scale * std::log(G.value), alpha, std::abs(scale * (std::log(fine) - std::log(mid)))};
}

/// Dispatches on alpha: kShannonAlpha gives H, anything else H_alpha.
inline EntropyEstimate entropy(const DensityGrid& g, double alpha = kShannonAlpha) {
    return alpha == kShannonAlpha ? shannon_entropy(g) : renyi_entropy(g, alpha);
}

} // namespace schurent
