#pragma once

// Command-line front end:
//   schurent verify <kind> [campaign flags] [--config file]
//   schurent entropy --model M --weights W [--alpha A]
//   schurent majorize --a A --b B
//   schurent grid-dump --model M --weights W --out file.csv
//
// Exit codes: 0 success, 1 usage or configuration error, 2 unexpected
// violation in a verification campaign.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "schurent/density_grid.hpp"
#include "schurent/dist_catalog.hpp"
#include "schurent/entropy.hpp"
#include "schurent/errors.hpp"
#include "schurent/harness.hpp"
#include "schurent/majorization.hpp"
#include "schurent/weights.hpp"

namespace schurent {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

namespace detail {

/// Flat "key = value" file; '#' starts a comment, keys are flag names
/// without the leading dashes.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw CampaignConfigError("cannot open config file '" + path + "'");
    }
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw CampaignConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key(trim(body.substr(0, eq)));
        std::string value(trim(body.substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        out[key] = value;
    }
    return out;
}

// Value of --config in argv, if present.
inline std::optional<std::string> find_config_arg(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            return std::string(argv[i + 1]);
        }
        if (arg.starts_with("--config=")) {
            return std::string(arg.substr(9));
        }
    }
    return std::nullopt;
}

// Config values become option defaults, so explicit flags still win.
inline void apply_config(CLI::App& sub, const std::map<std::string, std::string>& config) {
    for (const auto& [key, value] : config) {
        if (key == "config") {
            continue;
        }
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound&) {
            throw CampaignConfigError("unknown config key '" + key + "'");
        }
        if (opt->get_expected_max() == 0) {
            const bool on = value == "true" || value == "1" || value == "yes";
            if (!on && value != "false" && value != "0" && value != "no") {
                throw CampaignConfigError("config key '" + key + "' expects a boolean");
            }
            opt->default_val(on ? "true" : "false");
        } else {
            opt->default_val(value);
        }
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw CampaignConfigError("cannot write '" + path + "'");
    }
    out << text;
}

} // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Numerical checks of entropy monotonicity under majorization of weights", "schurent"};
    app.require_subcommand(1);

    // verify
    CampaignSpec spec;
    std::string kind_text;
    std::vector<std::string> model_tags;
    std::optional<std::size_t> n_fixed;
    std::string b_text;
    std::string json_path;
    std::string csv_path;
    std::string config_path;
    auto* verify = app.add_subcommand("verify", "Run a verification campaign");
    verify->add_option("kind", kind_text, "theorem1 | corollary1 | lemma1 | lemma2 | counterexample | scan-chain")
        ->required();
    verify->add_option("--model", model_tags, "Model tag, e.g. normal:0,1 (repeatable; ';'-separated in config)")
        ->delimiter(';');
    verify->add_option("--n", n_fixed, "Single vector length (overrides --n-min/--n-max)");
    verify->add_option("--n-min", spec.n_min, "Smallest vector length")->capture_default_str();
    verify->add_option("--n-max", spec.n_max, "Largest vector length")->capture_default_str();
    verify->add_option("--pairs", spec.pairs_per_case, "Pairs (or chains) per (model, n)")->capture_default_str();
    verify->add_option("--alpha", spec.alphas, "Renyi orders, comma-separated")->delimiter(',')->capture_default_str();
    verify->add_option("--seed", spec.seed, "Master seed")->capture_default_str();
    verify->add_option("--points", spec.grid.points_per_grid, "Grid points per factor")->capture_default_str();
    verify->add_option("--tail-tol", spec.grid.tail_mass_tol, "Tail mass dropped per factor")->capture_default_str();
    verify->add_option("--tau", spec.tolerance, "Verdict slack in nats")->capture_default_str();
    verify->add_flag("--expect-violation", spec.expect_violation, "Allow non-log-concave models in theorem modes");
    verify->add_option("--steps", spec.chain_steps, "Majorization chain steps")->capture_default_str();
    verify->add_option("--b", b_text, "scan-chain start vector, comma-separated");
    verify->add_option("--json", json_path, "Write the JSON report here instead of stdout");
    verify->add_option("--csv", csv_path, "Also write a CSV flattening");
    verify->add_option("--config", config_path, "Flat key = value file; flags override it");

    // entropy
    std::string e_model;
    std::string e_weights;
    double e_alpha = kShannonAlpha;
    std::size_t e_points = GridConfig{}.points_per_grid;
    auto* entropy_cmd = app.add_subcommand("entropy", "Entropy of one weighted sum, as JSON");
    entropy_cmd->add_option("--model", e_model, "Model tag")->required();
    entropy_cmd->add_option("--weights", e_weights, "Weights, comma-separated")->required();
    entropy_cmd->add_option("--alpha", e_alpha, "Renyi order; 1 selects Shannon")->capture_default_str();
    entropy_cmd->add_option("--points", e_points, "Grid points per factor")->capture_default_str();

    // majorize
    std::string m_a;
    std::string m_b;
    auto* majorize_cmd = app.add_subcommand("majorize", "Test a < b and print a transfer certificate");
    majorize_cmd->add_option("--a", m_a, "Candidate smaller vector")->required();
    majorize_cmd->add_option("--b", m_b, "Candidate larger vector")->required();

    // grid-dump
    std::string d_model;
    std::string d_weights;
    std::string d_out;
    std::size_t d_points = GridConfig{}.points_per_grid;
    auto* dump_cmd = app.add_subcommand("grid-dump", "Write the weighted-sum density grid as CSV");
    dump_cmd->add_option("--model", d_model, "Model tag")->required();
    dump_cmd->add_option("--weights", d_weights, "Weights, comma-separated")->required();
    dump_cmd->add_option("--out", d_out, "Output CSV path")->required();
    dump_cmd->add_option("--points", d_points, "Grid points per factor")->capture_default_str();

    try {
        if (argc > 1 && std::string_view(argv[1]) == "verify") {
            if (const auto path = detail::find_config_arg(argc, argv)) {
                detail::apply_config(*verify, detail::read_config_file(*path));
            }
        }
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*verify) {
            spec.kind = parse_campaign_kind(kind_text);
            for (const auto& tag : model_tags) {
                spec.models.push_back(DensityModel::parse(tag));
            }
            if (n_fixed) {
                spec.n_min = spec.n_max = *n_fixed;
            }
            if (!b_text.empty()) {
                spec.chain_start = WeightVector::parse(b_text);
            }
            spec.validate();
            const VerificationReport report = run_campaign(spec);
            const std::string json = report.to_json().dump(2) + "\n";
            if (json_path.empty()) {
                out << json;
            } else {
                detail::write_text_file(json_path, json);
            }
            if (!csv_path.empty()) {
                detail::write_text_file(csv_path, report.to_csv());
            }
            const Summary& s = report.summary();
            err << campaign_kind_name(spec.kind) << ": " << s.cases << " cases, " << s.passes << " pass, "
                << s.violations << " violation(s), " << s.expected_violations << " expected violation(s), worst margin "
                << detail::format_shortest(s.worst_margin) << '\n';
            return report.ok() ? kExitOk : kExitViolation;
        }
        if (*entropy_cmd) {
            const DensityModel model = DensityModel::parse(e_model);
            const WeightVector w = WeightVector::parse(e_weights);
            GridConfig cfg;
            cfg.points_per_grid = e_points;
            cfg.validate();
            EntropyEstimate h;
            try {
                h = entropy(weighted_sum_density(model, w, cfg), e_alpha);
            } catch (const DegenerateSumError&) {
                detail::check_alpha(e_alpha);
                h = degenerate_entropy(e_alpha);
            }
            Json j;
            j["model"] = model.tag();
            j["weights"] = w.vec();
            j["alpha"] = e_alpha;
            j["value"] = detail::number(h.value);
            j["error_bound"] = detail::number(h.error_bound);
            j["units"] = "nats";
            if (e_alpha > 1.0) {
                j["outside_hypothesis"] = true;
            }
            out << j.dump(2) << '\n';
            return kExitOk;
        }
        if (*majorize_cmd) {
            const WeightVector a = WeightVector::parse(m_a);
            const WeightVector b = WeightVector::parse(m_b);
            const bool holds = majorizes(a, b);
            Json j;
            j["a"] = a.vec();
            j["b"] = b.vec();
            j["majorized"] = holds;
            if (holds) {
                const TransferMatrix t = transfer_certificate(a, b);
                const auto tb = t.apply(b.entries());
                double residual = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    residual = std::max(residual, std::abs(tb[i] - a[i]));
                }
                j["certificate"] = t.rows();
                j["residual"] = residual;
                j["stochastic_defect"] = t.stochastic_defect();
            } else {
                j["certificate"] = nullptr;
            }
            out << j.dump(2) << '\n';
            return kExitOk;
        }
        if (*dump_cmd) {
            const DensityModel model = DensityModel::parse(d_model);
            const WeightVector w = WeightVector::parse(d_weights);
            GridConfig cfg;
            cfg.points_per_grid = d_points;
            cfg.validate();
            const DensityGrid g = weighted_sum_density(model, w, cfg);
            std::ofstream os(d_out, std::ios::binary);
            if (!os) {
                throw CampaignConfigError("cannot write '" + d_out + "'");
            }
            write_grid_csv(g, os);
            out << d_out << ": " << g.size() << " points, step " << detail::format_shortest(g.step()) << '\n';
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace schurent
