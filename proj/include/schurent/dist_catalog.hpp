#pragma once

// Analytic univariate densities used as the common law of the X_i.
//
// Parameterizations are fixed per family:
//   normal:mu,sigma      exponential:rate      uniform:lo,hi
//   laplace:mu,scale     logistic:mu,scale     gamma:shape,scale
// All entropies are in nats.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "schurent/detail/text.hpp"
#include "schurent/errors.hpp"

namespace schurent {

enum class Family { normal, exponential, uniform, laplace, logistic, gamma };

inline std::string_view family_name(Family f) {
    switch (f) {
    case Family::normal: return "normal";
    case Family::exponential: return "exponential";
    case Family::uniform: return "uniform";
    case Family::laplace: return "laplace";
    case Family::logistic: return "logistic";
    case Family::gamma: return "gamma";
    }
    return "unknown";
}

/// Interval on the extended real line; endpoints may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool lo_finite() const noexcept { return std::isfinite(lo); }
    bool hi_finite() const noexcept { return std::isfinite(hi); }
    double width() const noexcept { return hi - lo; }
};

/// Immutable analytic density model.
class DensityModel {
  public:
    static DensityModel normal(double mu, double sigma) {
        require(std::isfinite(mu), "normal location must be finite");
        require_positive(sigma, "normal sigma");
        return DensityModel(Family::normal, {mu, sigma});
    }
    static DensityModel exponential(double rate) {
        require_positive(rate, "exponential rate");
        return DensityModel(Family::exponential, {rate, 0.0});
    }
    static DensityModel uniform(double lo, double hi) {
        require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform needs finite lo < hi");
        return DensityModel(Family::uniform, {lo, hi});
    }
    static DensityModel laplace(double mu, double scale) {
        require(std::isfinite(mu), "laplace location must be finite");
        require_positive(scale, "laplace scale");
        return DensityModel(Family::laplace, {mu, scale});
    }
    static DensityModel logistic(double mu, double scale) {
        require(std::isfinite(mu), "logistic location must be finite");
        require_positive(scale, "logistic scale");
        return DensityModel(Family::logistic, {mu, scale});
    }
    static DensityModel gamma(double shape, double scale) {
        require_positive(shape, "gamma shape");
        require_positive(scale, "gamma scale");
        return DensityModel(Family::gamma, {shape, scale});
    }

    /// Parses "family:p1,p2", e.g. "gamma:0.5,1" or "exponential:1".
    static DensityModel parse(std::string_view text) {
        text = detail::trim(text);
        const auto colon = text.find(':');
        const auto name = text.substr(0, colon);
        std::vector<double> p;
        if (colon != std::string_view::npos) {
            p = detail::parse_double_list(text.substr(colon + 1));
        }
        auto arity = [&](std::size_t k) {
            if (p.size() != k) {
                throw ParameterDomainError("model '" + std::string(text) + "' expects " + std::to_string(k) +
                                           " parameter(s)");
            }
        };
        if (name == "normal") {
            arity(2);
            return normal(p[0], p[1]);
        }
        if (name == "exponential" || name == "exp") {
            arity(1);
            return exponential(p[0]);
        }
        if (name == "uniform") {
            arity(2);
            return uniform(p[0], p[1]);
        }
        if (name == "laplace") {
            arity(2);
            return laplace(p[0], p[1]);
        }
        if (name == "logistic") {
            arity(2);
            return logistic(p[0], p[1]);
        }
        if (name == "gamma") {
            arity(2);
            return gamma(p[0], p[1]);
        }
        throw ParameterDomainError("unknown model family '" + std::string(name) + "'");
    }

    Family family() const noexcept { return family_; }
    double param(std::size_t i) const { return params_.at(i); }

    /// Canonical descriptor, parseable by parse().
    std::string tag() const {
        std::string out(family_name(family_));
        out += ':';
        out += detail::format_shortest(params_[0]);
        if (family_ != Family::exponential) {
            out += ',';
            out += detail::format_shortest(params_[1]);
        }
        return out;
    }

    Interval support() const noexcept {
        constexpr double inf = std::numeric_limits<double>::infinity();
        switch (family_) {
        case Family::exponential:
        case Family::gamma: return {0.0, inf};
        case Family::uniform: return {params_[0], params_[1]};
        default: return {-inf, inf};
        }
    }

    /// log f(x); -inf outside the support.
    double log_density(double x) const {
        constexpr double ninf = -std::numeric_limits<double>::infinity();
        const double a = params_[0];
        const double b = params_[1];
        switch (family_) {
        case Family::normal: {
            const double z = (x - a) / b;
            return -0.5 * z * z - std::log(b) - 0.5 * std::log(2.0 * std::numbers::pi);
        }
        case Family::exponential: return x < 0.0 ? ninf : std::log(a) - a * x;
        case Family::uniform: return (x < a || x > b) ? ninf : -std::log(b - a);
        case Family::laplace: return -std::abs(x - a) / b - std::log(2.0 * b);
        case Family::logistic: {
            const double z = std::abs(x - a) / b;
            return -z - std::log(b) - 2.0 * std::log1p(std::exp(-z));
        }
        case Family::gamma:
            // Open support (0, inf): never evaluated at the shape < 1 singularity.
            if (x <= 0.0) {
                return ninf;
            }
            return (a - 1.0) * std::log(x) - x / b - std::lgamma(a) - a * std::log(b);
        }
        return ninf;
    }

    double density(double x) const { return std::exp(log_density(x)); }

    double cdf(double x) const {
        const double a = params_[0];
        const double b = params_[1];
        switch (family_) {
        case Family::normal: return 0.5 * std::erfc(-(x - a) / (b * std::numbers::sqrt2));
        case Family::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-a * x);
        case Family::uniform: return x <= a ? 0.0 : (x >= b ? 1.0 : (x - a) / (b - a));
        case Family::laplace: {
            const double z = (x - a) / b;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
        }
        case Family::logistic: return 1.0 / (1.0 + std::exp(-(x - a) / b));
        case Family::gamma: return x <= 0.0 ? 0.0 : boost::math::gamma_p(a, x / b);
        }
        return 0.0;
    }

    /// 1 - cdf(x), computed without cancellation in the upper tail.
    double survival(double x) const {
        const double a = params_[0];
        const double b = params_[1];
        switch (family_) {
        case Family::normal: return 0.5 * std::erfc((x - a) / (b * std::numbers::sqrt2));
        case Family::exponential: return x <= 0.0 ? 1.0 : std::exp(-a * x);
        case Family::uniform: return x <= a ? 1.0 : (x >= b ? 0.0 : (b - x) / (b - a));
        case Family::laplace: {
            const double z = (x - a) / b;
            return z > 0.0 ? 0.5 * std::exp(-z) : 1.0 - 0.5 * std::exp(z);
        }
        case Family::logistic: return 1.0 / (1.0 + std::exp((x - a) / b));
        case Family::gamma: return x <= 0.0 ? 1.0 : boost::math::gamma_q(a, x / b);
        }
        return 0.0;
    }

    /// P(lo < X <= hi), accurate in both tails.
    double interval_mass(double lo, double hi) const {
        if (!(hi > lo)) {
            return 0.0;
        }
        const double m = median();
        if (hi <= m) {
            return cdf(hi) - cdf(lo);
        }
        if (lo >= m) {
            return survival(lo) - survival(hi);
        }
        return 1.0 - cdf(lo) - survival(hi);
    }

    double median() const noexcept { return median_; }

    /// x with cdf(x) = p, by bisection.
    double quantile(double p) const { return quantile_bisect(p, false); }
    /// x with survival(x) = q, by bisection; resolves upper-tail quantiles below 1 - eps.
    double upper_quantile(double q) const { return quantile_bisect(q, true); }

    double mean() const noexcept {
        const double a = params_[0];
        const double b = params_[1];
        switch (family_) {
        case Family::normal:
        case Family::laplace:
        case Family::logistic: return a;
        case Family::exponential: return 1.0 / a;
        case Family::uniform: return 0.5 * (a + b);
        case Family::gamma: return a * b;
        }
        return 0.0;
    }

    double variance() const noexcept {
        const double a = params_[0];
        const double b = params_[1];
        switch (family_) {
        case Family::normal: return b * b;
        case Family::exponential: return 1.0 / (a * a);
        case Family::uniform: return (b - a) * (b - a) / 12.0;
        case Family::laplace: return 2.0 * b * b;
        case Family::logistic: return b * b * std::numbers::pi * std::numbers::pi / 3.0;
        case Family::gamma: return a * b * b;
        }
        return 0.0;
    }

    double stddev() const noexcept { return std::sqrt(variance()); }

    /// Analytic differential entropy in nats. Every catalog family has one;
    /// used as an oracle, never as the estimator under test.
    std::optional<double> closed_form_entropy() const {
        const double a = params_[0];
        const double b = params_[1];
        switch (family_) {
        case Family::normal: return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * b * b);
        case Family::exponential: return 1.0 - std::log(a);
        case Family::uniform: return std::log(b - a);
        case Family::laplace: return 1.0 + std::log(2.0 * b);
        case Family::logistic: return std::log(b) + 2.0;
        case Family::gamma:
            return a + std::log(b) + std::lgamma(a) + (1.0 - a) * boost::math::digamma(a);
        }
        return std::nullopt;
    }

    /// Gamma is log-concave iff shape >= 1; every other family always is.
    bool log_concave() const noexcept { return family_ != Family::gamma || params_[0] >= 1.0; }

    friend bool operator==(const DensityModel&, const DensityModel&) = default;

  private:
    DensityModel(Family family, std::array<double, 2> params) : family_(family), params_(params) {
        switch (family_) {
        case Family::uniform: median_ = 0.5 * (params_[0] + params_[1]); break;
        case Family::exponential: median_ = std::numbers::ln2 / params_[0]; break;
        case Family::gamma: median_ = quantile_bisect(0.5, false); break;
        default: median_ = params_[0];
        }
    }

    static void require(bool ok, const char* what) {
        if (!ok) {
            throw ParameterDomainError(what);
        }
    }
    static void require_positive(double v, const char* what) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw ParameterDomainError(std::string(what) + " must be finite and > 0");
        }
    }

    double quantile_bisect(double target, bool upper) const {
        if (!(target > 0.0 && target < 1.0)) {
            throw ParameterDomainError("quantile level must lie in (0, 1)");
        }
        auto below = [&](double x) { return upper ? survival(x) > target : cdf(x) < target; };
        const Interval s = support();
        const double spread = std::max(stddev(), 1e-300);
        double lo = s.lo_finite() ? s.lo : mean() - spread;
        double hi = s.hi_finite() ? s.hi : mean() + spread;
        for (int i = 0; !s.lo_finite() && !below(lo); ++i) {
            if (i > 2000) {
                throw DiscretizationError("cannot bracket lower quantile for " + tag());
            }
            lo -= spread * std::ldexp(1.0, i / 8);
        }
        for (int i = 0; !s.hi_finite() && below(hi); ++i) {
            if (i > 2000) {
                throw DiscretizationError("cannot bracket upper quantile for " + tag());
            }
            hi += spread * std::ldexp(1.0, i / 8);
        }
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            (below(mid) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    Family family_;
    std::array<double, 2> params_;
    double median_ = 0.0;
};

inline double log_density(const DensityModel& model, double x) { return model.log_density(x); }

inline std::optional<double> closed_form_entropy(const DensityModel& model) {
    return model.closed_form_entropy();
}

/// The six log-concave reference families.
inline std::vector<DensityModel> catalog_log_concave() {
    return {
        DensityModel::normal(0.0, 1.0),   DensityModel::exponential(1.0), DensityModel::uniform(0.0, 1.0),
        DensityModel::laplace(0.0, 1.0),  DensityModel::logistic(0.0, 1.0), DensityModel::gamma(2.0, 1.0),
    };
}

/// Gamma(1/n, 1): the law whose equal-weight n-fold sum is exponential(1).
inline DensityModel counterexample_model(int n) { return DensityModel::gamma(1.0 / n, 1.0); }

/// Standard battery: the log-concave families plus gamma(1/n, 1), n = 2, 3, 4.
inline std::vector<DensityModel> catalog_default() {
    auto out = catalog_log_concave();
    for (int n = 2; n <= 4; ++n) {
        out.push_back(counterexample_model(n));
    }
    return out;
}

} // namespace schurent
