#pragma once

// Verification campaigns over weighted sums S = sum_i a_i X_i of i.i.d. X_i.
//
// Each campaign is split into shards by (model, n). Every shard draws from its
// own generator seeded by (master seed, model tag, n) and runs sequentially;
// shards may run on several threads and are merged in a fixed order, so a
// report depends only on the spec.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "schurent/density_grid.hpp"
#include "schurent/dist_catalog.hpp"
#include "schurent/entropy.hpp"
#include "schurent/errors.hpp"
#include "schurent/majorization.hpp"
#include "schurent/stochastic_order.hpp"
#include "schurent/weights.hpp"

namespace schurent {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

enum class CampaignKind { theorem1, corollary1, lemma1, lemma2, counterexample, scan_chain };

inline std::string_view campaign_kind_name(CampaignKind k) {
    switch (k) {
    case CampaignKind::theorem1: return "theorem1";
    case CampaignKind::corollary1: return "corollary1";
    case CampaignKind::lemma1: return "lemma1";
    case CampaignKind::lemma2: return "lemma2";
    case CampaignKind::counterexample: return "counterexample";
    case CampaignKind::scan_chain: return "scan-chain";
    }
    return "unknown";
}

inline CampaignKind parse_campaign_kind(std::string_view s) {
    for (auto k : {CampaignKind::theorem1, CampaignKind::corollary1, CampaignKind::lemma1, CampaignKind::lemma2,
                   CampaignKind::counterexample, CampaignKind::scan_chain}) {
        if (campaign_kind_name(k) == s) {
            return k;
        }
    }
    throw CampaignConfigError("unknown campaign kind '" + std::string(s) + "'");
}

struct CampaignSpec {
    CampaignKind kind = CampaignKind::theorem1;
    /// Empty selects the kind's default battery.
    std::vector<DensityModel> models;
    std::size_t n_min = 2;
    std::size_t n_max = 5;
    std::size_t pairs_per_case = 25;
    std::vector<double> alphas{0.3, 0.5, 0.9};
    std::uint64_t seed = 1;
    GridConfig grid;
    /// Slack tau (nats) for one-sided inequality verdicts.
    double tolerance = 5e-4;
    /// Allows theorem1 on non-log-concave models; their cases are flagged.
    bool expect_violation = false;
    std::size_t chain_steps = 5;
    /// scan-chain start vector; drawn at random when absent.
    std::optional<WeightVector> chain_start;

    std::vector<DensityModel> effective_models() const {
        if (!models.empty()) {
            return models;
        }
        switch (kind) {
        case CampaignKind::lemma2: return catalog_default();
        case CampaignKind::counterexample: {
            std::vector<DensityModel> out;
            for (std::size_t n = n_min; n <= n_max; ++n) {
                out.push_back(counterexample_model(static_cast<int>(n)));
            }
            return out;
        }
        case CampaignKind::scan_chain: return {DensityModel::normal(0.0, 1.0)};
        default: return catalog_log_concave();
        }
    }

    void validate() const {
        grid.validate();
        if (n_min < 2 || n_min > n_max) {
            throw CampaignConfigError("need 2 <= n_min <= n_max");
        }
        if (pairs_per_case < 1) {
            throw CampaignConfigError("pairs_per_case must be >= 1");
        }
        if (chain_steps < 1) {
            throw CampaignConfigError("chain_steps must be >= 1");
        }
        if (!(tolerance >= 0.0)) {
            throw CampaignConfigError("tolerance must be >= 0");
        }
        for (double a : alphas) {
            const bool in_theorem_range = a > 0.0 && a < 1.0;
            if (kind == CampaignKind::scan_chain ? !(a > 0.0 && std::isfinite(a)) : !in_theorem_range) {
                throw CampaignConfigError("alpha " + detail::format_shortest(a) + " outside (0, 1)");
            }
        }
        if (chain_start && chain_start->size() < 1) {
            throw CampaignConfigError("chain start vector is empty");
        }
        const bool needs_log_concave = kind == CampaignKind::theorem1 || kind == CampaignKind::corollary1 ||
                                       kind == CampaignKind::lemma1;
        if (needs_log_concave && !expect_violation) {
            for (const auto& m : effective_models()) {
                if (!m.log_concave()) {
                    throw CampaignConfigError(m.tag() + " is not log-concave; " + std::string(campaign_kind_name(kind)) +
                                              " needs log-concave models (or expected-violation mode)");
                }
            }
        }
        if (kind == CampaignKind::lemma1 && expect_violation) {
            throw CampaignConfigError("lemma1 has no expected-violation mode");
        }
        if (kind == CampaignKind::counterexample) {
            for (const auto& m : effective_models()) {
                if (m.family() != Family::gamma || m.param(1) != 1.0 || !(m.param(0) < 1.0)) {
                    throw CampaignConfigError("counterexample models must be gamma(1/n, 1)");
                }
            }
        }
    }

    Json to_json() const {
        Json j;
        j["kind"] = campaign_kind_name(kind);
        j["models"] = Json::array();
        for (const auto& m : effective_models()) {
            j["models"].push_back(m.tag());
        }
        j["n_range"] = {n_min, n_max};
        j["pairs_per_case"] = pairs_per_case;
        j["alphas"] = alphas;
        j["seed"] = seed;
        j["grid"] = {{"points_per_grid", grid.points_per_grid},
                     {"tail_mass_tol", grid.tail_mass_tol},
                     {"normalization_tol", grid.normalization_tol}};
        j["tolerance"] = tolerance;
        j["expect_violation"] = expect_violation;
        j["chain_steps"] = chain_steps;
        if (chain_start) {
            j["chain_start"] = chain_start->vec();
        }
        j["parameterization"] = "normal:mu,sigma exponential:rate uniform:lo,hi laplace:mu,scale "
                                "logistic:mu,scale gamma:shape,scale; entropies in nats";
        return j;
    }
};

struct AlphaRecord {
    double alpha = 0.5;
    double h_a = 0.0;
    double h_b = 0.0;
    double margin = 0.0;
    double error_bound = 0.0;
    bool pass = true;
    bool outside_hypothesis = false; // alpha >= 1
};

struct CaseRecord {
    std::string model;
    std::size_t n = 0;
    std::string label;
    std::vector<double> a;
    std::vector<double> b;
    double h_a = 0.0;
    double h_b = 0.0;
    double margin = 0.0; // H(b.X) - H(a.X) for entropy comparisons
    double error_bound = 0.0;
    std::vector<AlphaRecord> alpha_values;
    std::string verdict = "pass";
    bool expected_violation = false;
    bool mixed_sign = false;
    Json details; // sub-check reports of lemma campaigns

    bool failed() const { return verdict == "violation" || verdict == "inconsistent" || verdict == "fail"; }
};

struct Summary {
    std::size_t cases = 0;
    std::size_t passes = 0;
    std::size_t violations = 0;          // unexpected
    std::size_t expected_violations = 0; // strict violations in expected-violation cases
    std::size_t inconclusive = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
};

class VerificationReport {
  public:
    VerificationReport(CampaignSpec spec, std::vector<CaseRecord> cases)
        : spec_(std::move(spec)), cases_(std::move(cases)) {
        for (const auto& c : cases_) {
            ++summary_.cases;
            if (c.verdict == "pass") {
                ++summary_.passes;
            } else if (c.verdict == "expected_violation") {
                ++summary_.expected_violations;
            } else if (c.verdict == "inconclusive") {
                ++summary_.inconclusive;
            } else {
                ++summary_.violations;
            }
            summary_.worst_margin = std::min(summary_.worst_margin, c.margin);
            for (const auto& av : c.alpha_values) {
                summary_.worst_margin = std::min(summary_.worst_margin, av.margin);
            }
        }
    }

    const CampaignSpec& campaign() const noexcept { return spec_; }
    const std::vector<CaseRecord>& cases() const noexcept { return cases_; }
    const Summary& summary() const noexcept { return summary_; }

    /// Every non-expected verdict passes and, for a counterexample campaign,
    /// at least one strict violation was observed.
    bool ok() const {
        if (summary_.violations != 0) {
            return false;
        }
        if (spec_.kind == CampaignKind::counterexample && summary_.expected_violations == 0) {
            return false;
        }
        return true;
    }

    /// 0 when ok(), 2 on an unexpected violation.
    int exit_code() const { return ok() ? 0 : 2; }

    Json to_json() const;
    std::string to_csv() const;

  private:
    CampaignSpec spec_;
    std::vector<CaseRecord> cases_;
    Summary summary_;
};

namespace detail {

// JSON has no infinities; they are written as strings.
inline Json number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t shard_seed(std::uint64_t master, std::string_view model_tag, std::size_t n) {
    return Rng::mix(Rng::mix(master ^ fnv1a(model_tag)) + n);
}

inline std::size_t thread_cap() {
    if (const char* env = std::getenv("SCHURENT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) {
            return static_cast<std::size_t>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs shards on up to thread_cap() threads; results keep shard order.
inline std::vector<CaseRecord> run_shards(const std::vector<std::function<std::vector<CaseRecord>()>>& shards) {
    std::vector<std::vector<CaseRecord>> results(shards.size());
    std::vector<std::exception_ptr> errors(shards.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < shards.size(); i = next++) {
            try {
                results[i] = shards[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(thread_cap(), shards.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    std::vector<CaseRecord> out;
    for (std::size_t i = 0; i < shards.size(); ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        std::move(results[i].begin(), results[i].end(), std::back_inserter(out));
    }
    return out;
}

/// Entropies of one weighted sum: Shannon first, then one per alpha.
struct SumEntropies {
    EntropyEstimate shannon;
    std::vector<EntropyEstimate> renyi;
};

inline SumEntropies sum_entropies(const DensityModel& model, const WeightVector& w, const std::vector<double>& alphas,
                                  const GridConfig& cfg) {
    SumEntropies out;
    try {
        const DensityGrid g = weighted_sum_density(model, w, cfg);
        out.shannon = shannon_entropy(g);
        for (double a : alphas) {
            out.renyi.push_back(renyi_entropy(g, a));
        }
    } catch (const DegenerateSumError&) {
        out.shannon = degenerate_entropy();
        for (double a : alphas) {
            out.renyi.push_back(degenerate_entropy(a));
        }
    }
    return out;
}

inline double entropy_margin(const EntropyEstimate& hb, const EntropyEstimate& ha) {
    if (ha.degenerate() && hb.degenerate()) {
        return 0.0;
    }
    return hb.value - ha.value;
}

inline bool semi_infinite(const DensityModel& m) {
    const Interval s = m.support();
    return s.lo_finite() != s.hi_finite();
}

// Schur-convexity comparison a < b: pass iff every margin >= -(tau + bounds).
inline CaseRecord compare_case(const DensityModel& model, std::string label, const WeightVector& a,
                               const WeightVector& b, const SumEntropies& ea, const SumEntropies& eb,
                               const CampaignSpec& spec, bool expected_violation) {
    CaseRecord c;
    c.model = model.tag();
    c.n = a.size();
    c.label = std::move(label);
    c.a = a.vec();
    c.b = b.vec();
    c.h_a = ea.shannon.value;
    c.h_b = eb.shannon.value;
    c.margin = entropy_margin(eb.shannon, ea.shannon);
    c.error_bound = ea.shannon.error_bound + eb.shannon.error_bound;
    c.expected_violation = expected_violation;
    c.mixed_sign = semi_infinite(model) && (a.mixed_sign() || b.mixed_sign());
    bool all_pass = c.margin >= -(spec.tolerance + c.error_bound);
    for (std::size_t k = 0; k < spec.alphas.size(); ++k) {
        AlphaRecord r;
        r.alpha = spec.alphas[k];
        r.h_a = ea.renyi[k].value;
        r.h_b = eb.renyi[k].value;
        r.margin = entropy_margin(eb.renyi[k], ea.renyi[k]);
        r.error_bound = ea.renyi[k].error_bound + eb.renyi[k].error_bound;
        r.outside_hypothesis = !(r.alpha > 0.0 && r.alpha < 1.0);
        r.pass = r.margin >= -(spec.tolerance + r.error_bound);
        if (!r.outside_hypothesis) {
            all_pass = all_pass && r.pass;
        }
        c.alpha_values.push_back(r);
    }
    if (all_pass) {
        c.verdict = "pass";
    } else {
        c.verdict = expected_violation ? "expected_violation" : "violation";
    }
    return c;
}

inline std::vector<double> uniform_vector(std::size_t n, double value) { return std::vector<double>(n, value); }

// n nonnegative entries summing to total (uniform on the scaled simplex).
inline WeightVector random_simplex(Rng& rng, std::size_t n, double total) {
    std::vector<double> cuts(n - 1);
    for (double& c : cuts) {
        c = rng.unit();
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> w(n);
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        w[i] = total * (cuts[i] - prev);
        prev = cuts[i];
    }
    w[n - 1] = total * (1.0 - prev);
    return WeightVector(std::move(w));
}

inline std::pair<WeightVector, WeightVector> shard_pair(std::uint64_t shard, std::size_t n, std::size_t i) {
    return random_majorization_pair(n, Rng::mix(shard + i));
}

template <class ShardFn>
std::vector<std::function<std::vector<CaseRecord>()>> per_model_and_n(const CampaignSpec& spec, ShardFn fn) {
    std::vector<std::function<std::vector<CaseRecord>()>> shards;
    for (const auto& model : spec.effective_models()) {
        for (std::size_t n = spec.n_min; n <= spec.n_max; ++n) {
            const std::uint64_t seed = shard_seed(spec.seed, model.tag(), n);
            shards.emplace_back([fn, model, n, seed] { return fn(model, n, seed); });
        }
    }
    return shards;
}

inline Json convex_order_json(const ConvexOrderReport& r) {
    Json j;
    j["verdict"] = verdict_name(r.verdict);
    j["means_equal"] = r.means_equal;
    j["mean_gap"] = number(r.mean_gap);
    j["stop_loss_margin"] = number(r.stop_loss_margin);
    j["stop_loss_argmin"] = number(r.stop_loss_argmin);
    j["ladder_points"] = r.ladder_points;
    Json tf = Json::object();
    for (const auto& m : r.test_function_margins) {
        tf[m.tag] = number(m.margin);
    }
    j["test_function_margins"] = tf;
    return j;
}

inline Json lemma1_json(const Lemma1Report& r) {
    Json j;
    j["pass"] = r.pass;
    j["preconditions_met"] = r.preconditions_met;
    j["y_log_concave"] = r.y_log_concave;
    j["mass_outside_support"] = number(r.mass_outside_support);
    j["jensen"] = {{"H_Y", number(r.h_y.value)},
                   {"cross_entropy", number(r.cross.value)},
                   {"H_X", number(r.h_x.value)},
                   {"upper_margin", number(r.jensen_upper_margin)},
                   {"lower_margin", number(r.jensen_lower_margin)},
                   {"error_bounds", {number(r.h_y.error_bound), number(r.cross.error_bound), number(r.h_x.error_bound)}},
                   {"pass", r.jensen_pass}};
    Json holder = Json::array();
    for (const auto& h : r.holder) {
        holder.push_back({{"alpha", h.alpha},
                          {"G_Y", number(h.g_y.value)},
                          {"middle", number(h.middle.value)},
                          {"G_X", number(h.g_x.value)},
                          {"upper_margin", number(h.upper_margin)},
                          {"lower_margin", number(h.lower_margin)},
                          {"error_bounds", {number(h.g_y.error_bound), number(h.middle.error_bound),
                                            number(h.g_x.error_bound)}},
                          {"pass", h.pass}});
    }
    j["holder"] = holder;
    j["worst_slack"] = number(r.worst_slack);
    j["convex_order"] = convex_order_json(r.convex_order);
    return j;
}

} // namespace detail

/// Schur convexity of H and H_alpha over random pairs a < b.
inline VerificationReport run_theorem1(const CampaignSpec& spec) {
    spec.validate();
    auto shard = [spec](const DensityModel& model, std::size_t n, std::uint64_t seed) {
        std::vector<CaseRecord> out;
        const bool expected = !model.log_concave();
        for (std::size_t i = 0; i < spec.pairs_per_case; ++i) {
            const auto [a, b] = detail::shard_pair(seed, n, i);
            const auto ea = detail::sum_entropies(model, a, spec.alphas, spec.grid);
            const auto eb = detail::sum_entropies(model, b, spec.alphas, spec.grid);
            out.push_back(detail::compare_case(model, "random", a, b, ea, eb, spec, expected));
        }
        return out;
    };
    return VerificationReport(spec, detail::run_shards(detail::per_model_and_n(spec, shard)));
}

/// Equal weights minimize H at a fixed sum; H is monotone along chains b -> mean.
inline VerificationReport run_corollary1(const CampaignSpec& spec) {
    spec.validate();
    auto shard = [spec](const DensityModel& model, std::size_t n, std::uint64_t seed) {
        std::vector<CaseRecord> out;
        Rng rng(seed);
        const bool expected = !model.log_concave();
        for (std::size_t i = 0; i < spec.pairs_per_case; ++i) {
            std::vector<double> start(n);
            for (double& v : start) {
                v = rng.uniform(-1.0, 2.0);
            }
            const auto chain = majorization_chain(WeightVector(std::move(start)), spec.chain_steps);
            std::vector<detail::SumEntropies> values;
            for (const auto& v : chain) {
                values.push_back(detail::sum_entropies(model, v, spec.alphas, spec.grid));
            }
            const std::string tag = "chain " + std::to_string(i);
            out.push_back(detail::compare_case(model, tag + " uniform-vs-start", chain.back(), chain.front(),
                                               values.back(), values.front(), spec, expected));
            for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
                out.push_back(detail::compare_case(model, tag + " step " + std::to_string(k), chain[k + 1], chain[k],
                                                   values[k + 1], values[k], spec, expected));
            }
        }
        return out;
    };
    return VerificationReport(spec, detail::run_shards(detail::per_model_and_n(spec, shard)));
}

/// Gamma(1/n, 1): equal weights maximize H among nonnegative weights summing to n.
/// Cases compare a = (1, ..., 1) with b = (n, 0, ..., 0) and random b on the
/// scaled simplex; a strict Schur-convexity violation is the expected outcome.
inline VerificationReport run_counterexample(const CampaignSpec& spec) {
    spec.validate();
    std::vector<std::function<std::vector<CaseRecord>()>> shards;
    for (std::size_t n = spec.n_min; n <= spec.n_max; ++n) {
        const DensityModel model = counterexample_model(static_cast<int>(n));
        const std::uint64_t seed = detail::shard_seed(spec.seed, model.tag(), n);
        shards.emplace_back([spec, model, n, seed] {
            std::vector<CaseRecord> out;
            Rng rng(seed);
            const WeightVector equal(detail::uniform_vector(n, 1.0));
            const auto e_equal = detail::sum_entropies(model, equal, spec.alphas, spec.grid);
            std::vector<std::pair<std::string, WeightVector>> others;
            std::vector<double> point(n, 0.0);
            point[0] = static_cast<double>(n);
            others.emplace_back("fixture point-mass", WeightVector(point));
            for (std::size_t i = 0; i < spec.pairs_per_case; ++i) {
                others.emplace_back("random simplex", detail::random_simplex(rng, n, static_cast<double>(n)));
            }
            for (const auto& [label, b] : others) {
                const auto eb = detail::sum_entropies(model, b, spec.alphas, spec.grid);
                CaseRecord c = detail::compare_case(model, label, equal, b, e_equal, eb, spec, true);
                const double slack = spec.tolerance + c.error_bound;
                if (c.margin < -slack) {
                    c.verdict = "expected_violation";
                } else if (c.margin <= slack) {
                    c.verdict = "pass";
                } else {
                    c.verdict = "inconsistent"; // unequal weights beat equal ones
                }
                out.push_back(std::move(c));
            }
            return out;
        });
    }
    return VerificationReport(spec, detail::run_shards(shards));
}

/// lemma2: convex order of a.X vs b.X for every model (log-concave or not).
/// lemma1: both entropy chains, with the convex order as precondition.
/// Pairs: random a < b plus the fixtures
///   equal weights vs (0, 1/(n-1), ..., 1/(n-1)),
///   equal weights vs a random point of the simplex,
///   and (1/2, 1/2) vs (1, 0) at n = 2.
inline VerificationReport run_lemma_campaigns(const CampaignSpec& spec) {
    spec.validate();
    if (spec.kind != CampaignKind::lemma1 && spec.kind != CampaignKind::lemma2) {
        throw CampaignConfigError("run_lemma_campaigns needs kind lemma1 or lemma2");
    }
    const bool lemma1 = spec.kind == CampaignKind::lemma1;
    auto shard = [spec, lemma1](const DensityModel& model, std::size_t n, std::uint64_t seed) {
        std::vector<CaseRecord> out;
        Rng rng(seed);
        std::vector<std::tuple<std::string, WeightVector, WeightVector>> pairs;
        const double nd = static_cast<double>(n);
        std::vector<double> drop_one(n, 1.0 / (nd - 1.0));
        drop_one[0] = 0.0;
        pairs.emplace_back("fixture equal-vs-drop-one", WeightVector(detail::uniform_vector(n, 1.0 / nd)),
                           WeightVector(drop_one));
        if (!lemma1) {
            pairs.emplace_back("fixture equal-vs-simplex", WeightVector(detail::uniform_vector(n, 1.0 / nd)),
                               detail::random_simplex(rng, n, 1.0));
        }
        if (n == 2) {
            pairs.emplace_back("fixture half-vs-single", WeightVector{0.5, 0.5}, WeightVector{1.0, 0.0});
        }
        for (std::size_t i = 0; i < spec.pairs_per_case; ++i) {
            auto [a, b] = detail::shard_pair(seed, n, i);
            pairs.emplace_back("random", std::move(a), std::move(b));
        }
        for (const auto& [label, a, b] : pairs) {
            CaseRecord c;
            c.model = model.tag();
            c.n = n;
            c.label = label;
            c.a = a.vec();
            c.b = b.vec();
            c.mixed_sign = detail::semi_infinite(model) && (a.mixed_sign() || b.mixed_sign());
            const DensityGrid gx = weighted_sum_density(model, a, spec.grid);
            const DensityGrid gy = weighted_sum_density(model, b, spec.grid);
            if (lemma1) {
                try {
                    const Lemma1Report r = lemma1_chain_check(gx, gy, spec.alphas);
                    c.h_a = r.h_x.value;
                    c.h_b = r.h_y.value;
                    // Smallest link margin after its error allowance.
                    c.margin = r.worst_slack;
                    c.error_bound = 0.0;
                    c.verdict = r.pass ? "pass" : "fail";
                    c.details = detail::lemma1_json(r);
                } catch (const SupportViolationError& e) {
                    c.verdict = "fail";
                    c.details = {{"error", e.what()}};
                }
            } else {
                const ConvexOrderReport r = convex_order_check(gx, gy, ConvexOrderTolerance{});
                const EntropyEstimate hx = shannon_entropy(gx);
                const EntropyEstimate hy = shannon_entropy(gy);
                c.h_a = hx.value;
                c.h_b = hy.value;
                c.margin = r.stop_loss_margin;
                c.error_bound = 0.0;
                c.verdict = r.verdict == Verdict::fail ? "fail" : std::string(verdict_name(r.verdict));
                c.details = detail::convex_order_json(r);
            }
            out.push_back(std::move(c));
        }
        return out;
    };
    return VerificationReport(spec, detail::run_shards(detail::per_model_and_n(spec, shard)));
}

/// H (and H_alpha, alpha > 0 allowed) along majorization_chain(b) for the
/// first model; each adjacent pair is one case.
inline VerificationReport run_scan_chain(const CampaignSpec& spec) {
    spec.validate();
    const DensityModel model = spec.effective_models().front();
    WeightVector start;
    if (spec.chain_start) {
        start = *spec.chain_start;
    } else {
        Rng rng(detail::shard_seed(spec.seed, model.tag(), spec.n_min));
        std::vector<double> v(spec.n_min);
        for (double& x : v) {
            x = rng.uniform(-1.0, 2.0);
        }
        start = WeightVector(std::move(v));
    }
    const auto chain = majorization_chain(start, spec.chain_steps);
    std::vector<detail::SumEntropies> values;
    for (const auto& v : chain) {
        values.push_back(detail::sum_entropies(model, v, spec.alphas, spec.grid));
    }
    std::vector<CaseRecord> cases;
    const bool expected = !model.log_concave();
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        cases.push_back(detail::compare_case(model, "step " + std::to_string(k), chain[k + 1], chain[k], values[k + 1],
                                             values[k], spec, expected));
    }
    return VerificationReport(spec, std::move(cases));
}

inline VerificationReport run_campaign(const CampaignSpec& spec) {
    switch (spec.kind) {
    case CampaignKind::theorem1: return run_theorem1(spec);
    case CampaignKind::corollary1: return run_corollary1(spec);
    case CampaignKind::lemma1:
    case CampaignKind::lemma2: return run_lemma_campaigns(spec);
    case CampaignKind::counterexample: return run_counterexample(spec);
    case CampaignKind::scan_chain: return run_scan_chain(spec);
    }
    throw CampaignConfigError("unknown campaign kind");
}

inline Json VerificationReport::to_json() const {
    using detail::number;
    Json j;
    j["schema"] = kReportSchema;
    j["campaign"] = spec_.to_json();
    Json cases = Json::array();
    for (const auto& c : cases_) {
        Json jc;
        jc["model"] = c.model;
        jc["n"] = c.n;
        jc["label"] = c.label;
        jc["a"] = c.a;
        jc["b"] = c.b;
        jc["H_a"] = number(c.h_a);
        jc["H_b"] = number(c.h_b);
        Json av = Json::object();
        for (const auto& r : c.alpha_values) {
            Json ja = {{"H_a", number(r.h_a)},
                       {"H_b", number(r.h_b)},
                       {"margin", number(r.margin)},
                       {"error_bound", number(r.error_bound)},
                       {"pass", r.pass}};
            if (r.outside_hypothesis) {
                ja["outside_hypothesis"] = true;
            }
            av[detail::format_shortest(r.alpha)] = ja;
        }
        jc["alpha_values"] = av;
        jc["margin"] = number(c.margin);
        jc["error_bound"] = number(c.error_bound);
        jc["verdict"] = c.verdict;
        jc["expected_violation"] = c.expected_violation;
        jc["mixed_sign"] = c.mixed_sign;
        if (!c.details.is_null()) {
            jc["details"] = c.details;
        }
        cases.push_back(std::move(jc));
    }
    j["cases"] = std::move(cases);
    j["summary"] = {{"cases", summary_.cases},
                    {"passes", summary_.passes},
                    {"violations", summary_.violations},
                    {"expected_violations", summary_.expected_violations},
                    {"inconclusive", summary_.inconclusive},
                    {"worst_margin", number(summary_.worst_margin)},
                    {"ok", ok()}};
    return j;
}

/// One row per case; per-alpha columns follow the campaign's alpha list.
inline std::string VerificationReport::to_csv() const {
    std::ostringstream os;
    os << "model,n,label,a,b,H_a,H_b,margin,error_bound,verdict,expected_violation,mixed_sign";
    for (double a : spec_.alphas) {
        const auto t = detail::format_shortest(a);
        os << ",H_a@" << t << ",H_b@" << t << ",margin@" << t;
    }
    os << '\n';
    for (const auto& c : cases_) {
        os << c.model << ',' << c.n << ',' << c.label << ',' << detail::join_shortest(c.a, ';') << ','
           << detail::join_shortest(c.b, ';') << ',' << detail::format_17g(c.h_a) << ',' << detail::format_17g(c.h_b)
           << ',' << detail::format_17g(c.margin) << ',' << detail::format_17g(c.error_bound) << ',' << c.verdict << ','
           << (c.expected_violation ? "true" : "false") << ',' << (c.mixed_sign ? "true" : "false");
        for (const auto& r : c.alpha_values) {
            os << ',' << detail::format_17g(r.h_a) << ',' << detail::format_17g(r.h_b) << ','
               << detail::format_17g(r.margin);
        }
        os << '\n';
    }
    return os.str();
}

} // namespace schurent
