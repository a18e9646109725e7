// otmsim -- command-line front end.
//
//   exact      closed-form thermodynamic report and symmetry ratio
//   estimate   one shot-based interferometric trial
//   campaign   repeated trials with running statistics (CSV + summary)
//   sweep-u    exact characteristic functions on a grid of u
//   decompose  Pauli coefficients of the Boltzmann factors
//
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure,
// 4 output I/O failure.  All output is deterministic; nothing timestamps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otm/config_io.hpp"
#include "otm/experiment.hpp"

namespace {

using otm::Complex;
using otm::Json;

struct Opts {
    std::string preset;
    std::string config_path;
    std::vector<std::string> sets;
    std::string noise_arg = "none";
    std::string out_path;
    std::string which;  // decompose positional
    double u = 1.0;
    double u_min = -3.0;
    double u_max = 3.0;
    int u_steps = 61;
    std::int64_t shots = 20000;
    int trials = 100;
    std::uint64_t seed = 0;
    bool dump_config = false;
};

void apply_sets(Json& cfg, const std::vector<std::string>& sets) {
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("--set expects KEY=VALUE, got \"" + kv + "\"");
        const std::string key = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        Json value;
        if (Json::accept(raw))
            value = Json::parse(raw);
        else
            value = raw;  // bare strings need no quotes
        Json* node = &cfg;
        std::size_t pos = 0;
        while (true) {
            const auto dot = key.find('.', pos);
            const std::string part =
                key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
            if (part.empty()) throw std::invalid_argument("--set: empty key segment in \"" + key + "\"");
            if (dot == std::string::npos) {
                (*node)[part] = value;
                break;
            }
            node = &(*node)[part];
            pos = dot + 1;
        }
    }
}

Json effective_config(const Opts& o) {
    Json cfg = Json::object();
    if (!o.config_path.empty()) {
        std::ifstream f(o.config_path);
        if (!f) throw std::invalid_argument("cannot read config file: " + o.config_path);
        cfg = Json::parse(f);
        if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    }
    if (!o.preset.empty()) {
        if (cfg.contains("preset") && cfg["preset"] != Json(o.preset))
            throw std::invalid_argument("--preset conflicts with the config file's preset");
        cfg["preset"] = o.preset;
    }
    apply_sets(cfg, o.sets);
    if (cfg.empty())
        throw std::invalid_argument("no system given; pass --preset, --config, or --set");
    return cfg;
}

otm::SystemSpec spec_from_opts(const Opts& o) { return otm::spec_from_json(effective_config(o)); }

std::optional<otm::NoiseModel> noise_from_opts(const Opts& o) {
    if (o.noise_arg.empty() || o.noise_arg == "none") return std::nullopt;
    if (o.noise_arg == "ibm-like") return otm::NoiseModel::ibm_like();
    std::ifstream f(o.noise_arg);
    if (!f) throw std::invalid_argument("cannot read noise file: " + o.noise_arg);
    return otm::noise_from_json(Json::parse(f));
}

Json noise_field(const std::optional<otm::NoiseModel>& noise) {
    if (!noise) return Json("none");
    return otm::noise_to_json(*noise);
}

int config_error(const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
}

int compute_error(const std::exception& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
}

// Writes to --out when given, stdout otherwise; 4 on any write failure.
int emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "i/o error: cannot open %s for writing\n", out_path.c_str());
        return 4;
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f.good()) {
        std::fprintf(stderr, "i/o error: short write to %s\n", out_path.c_str());
        return 4;
    }
    return 0;
}

double sig9(double v) { return otm::round_sig9(v); }

// ------------------------------------------------------------------ exact --

int run_exact(const Opts& o) {
    otm::SystemSpec spec;
    try {
        spec = spec_from_opts(o);
        if (!std::isfinite(o.u)) throw std::invalid_argument("--u must be finite");
    } catch (const std::exception& e) {
        return config_error(e);
    }
    if (o.dump_config) return emit(o.out_path, otm::spec_to_json(spec).dump(2) + "\n");

    Json rep = Json::object();
    try {
        const otm::ThermoReport t = otm::thermo_report(spec);
        const Complex ratio = otm::symmetry_ratio(spec, o.u);
        rep["u"] = sig9(o.u);
        rep["ratio"] = sig9(std::abs(ratio));
        rep["ratio_re"] = sig9(ratio.real());
        rep["ratio_im"] = sig9(ratio.imag());
        rep["z0"] = sig9(t.z0);
        rep["z_tau"] = sig9(t.z_tau);
        rep["z_tilde_0"] = sig9(t.z_tilde_0);
        rep["z_tilde_tau"] = sig9(t.z_tilde_tau);
        rep["delta_f"] = sig9(t.delta_f);
        rep["rel_ent_tau"] = sig9(t.rel_ent_tau);
        rep["rel_ent_0"] = sig9(t.rel_ent_0);
        rep["avg_work"] = sig9(t.avg_work);
        rep["excess_work"] = sig9(t.excess_work);
        rep["kl_fb"] = sig9(t.kl_fb);
        rep["crossing_work"] = sig9(t.crossing_work);
    } catch (const std::exception& e) {
        return compute_error(e);
    }
    return emit(o.out_path, rep.dump(2) + "\n");
}

// --------------------------------------------------------------- estimate --

int run_estimate(const Opts& o) {
    otm::CampaignConfig config;
    try {
        config.spec = spec_from_opts(o);
        config.u = o.u;
        if (!std::isfinite(o.u)) throw std::invalid_argument("--u must be finite");
        config.shots = o.shots;
        config.trials = 1;
        config.noise = noise_from_opts(o);
        config.seed = o.seed;
    } catch (const std::exception& e) {
        return config_error(e);
    }

    Json rep = Json::object();
    try {
        const otm::TrialEstimate est = otm::run_trial_detailed(config, 0);
        const double r_true = std::abs(otm::symmetry_ratio(config.spec, config.u));
        rep["u"] = sig9(config.u);
        rep["shots"] = config.shots;
        rep["seed"] = config.seed;
        rep["noise"] = noise_field(config.noise);
        rep["cf_re"] = sig9(est.cf.real());
        rep["cf_im"] = sig9(est.cf.imag());
        rep["cb_re"] = sig9(est.cb.real());
        rep["cb_im"] = sig9(est.cb.imag());
        rep["r"] = sig9(est.r);
        rep["r_true"] = sig9(r_true);
        rep["error_pct"] = sig9(std::abs(1.0 - est.r / r_true) * 100.0);
    } catch (const std::exception& e) {
        return compute_error(e);
    }
    return emit(o.out_path, rep.dump(2) + "\n");
}

// --------------------------------------------------------------- campaign --

int run_campaign_cmd(const Opts& o) {
    otm::CampaignConfig config;
    try {
        config.spec = spec_from_opts(o);
        config.u = o.u;
        if (!std::isfinite(o.u)) throw std::invalid_argument("--u must be finite");
        config.shots = o.shots;
        config.trials = o.trials;
        config.noise = noise_from_opts(o);
        config.seed = o.seed;
    } catch (const std::exception& e) {
        return config_error(e);
    }

    otm::CampaignResult result;
    std::string csv;
    try {
        result = otm::run_campaign(config);
        csv = otm::campaign_csv(result);
    } catch (const std::exception& e) {
        return compute_error(e);
    }

    const std::string csv_path = o.out_path.empty() ? "campaign.csv" : o.out_path;
    if (const int rc = emit(csv_path, csv); rc != 0) return rc;

    const std::size_t last = result.per_trial_r.size() - 1;
    Json summary = Json::object();
    summary["r_true"] = sig9(result.r_true);
    summary["mean_R_N"] = sig9(result.running_mean[last]);
    summary["ci99"] = sig9(result.ci99_halfwidth[last]);
    summary["e_N_pct"] = sig9(result.error_rate_pct[last]);
    summary["trials"] = config.trials;
    summary["shots"] = config.shots;
    summary["seed"] = config.seed;
    const std::string text = summary.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
}

// ---------------------------------------------------------------- sweep-u --

int run_sweep(const Opts& o) {
    otm::SystemSpec spec;
    try {
        spec = spec_from_opts(o);
        if (!(std::isfinite(o.u_min) && std::isfinite(o.u_max) && o.u_min <= o.u_max))
            throw std::invalid_argument("--u-min must not exceed --u-max");
        if (o.u_steps < 1) throw std::invalid_argument("--u-steps must be at least 1");
    } catch (const std::exception& e) {
        return config_error(e);
    }

    std::string csv;
    try {
        std::ostringstream out;
        out << "u,cf_re,cf_im,cb_re,cb_im,ratio_abs\n";
        for (int k = 0; k < o.u_steps; ++k) {
            const double u = (o.u_steps == 1)
                                 ? o.u_min
                                 : o.u_min + (o.u_max - o.u_min) * k / (o.u_steps - 1);
            const otm::CharacteristicValue cf =
                otm::cf_trace(spec, u, otm::TraceForm::forward);
            const otm::CharacteristicValue cb =
                otm::cf_trace(spec, u, otm::TraceForm::backward_shifted);
            const Complex ratio = otm::symmetry_ratio(spec, u);
            out << otm::fmt_sig9(u) << ',' << otm::fmt_sig9(cf.value.real()) << ','
                << otm::fmt_sig9(cf.value.imag()) << ',' << otm::fmt_sig9(cb.value.real())
                << ',' << otm::fmt_sig9(cb.value.imag()) << ','
                << otm::fmt_sig9(std::abs(ratio)) << '\n';
        }
        csv = out.str();
    } catch (const std::exception& e) {
        return compute_error(e);
    }
    return emit(o.out_path, csv);
}

// -------------------------------------------------------------- decompose --

int run_decompose(const Opts& o) {
    otm::SystemSpec spec;
    try {
        spec = spec_from_opts(o);
    } catch (const std::exception& e) {
        return config_error(e);
    }

    Json out = Json::object();
    try {
        const otm::ConditionalFrame frame = otm::conditional_frame(spec);
        const double sign = (o.which == "h0") ? -1.0 : 1.0;
        const otm::Matrix& g = (o.which == "h0") ? frame.g0 : frame.g_tau;
        const otm::Matrix boltz = otm::mat_fn_hermitian(g, Complex(sign * spec.beta, 0.0));
        const otm::PauliDecomposition dec = otm::pauli_decompose(boltz);
        for (std::size_t k = 0; k < dec.coeffs.size(); ++k) {
            if (std::abs(dec.coeffs[k]) <= 1e-12) continue;
            out[otm::pauli_label(dec.n_qubits, static_cast<int>(k))] =
                sig9(dec.coeffs[k].real());
        }
    } catch (const std::exception& e) {
        return compute_error(e);
    }
    return emit(o.out_path, out.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-time-measurement work statistics: exact spectra and shot-based interferometry"};
    app.require_subcommand(1);

    Opts o;
    auto add_system = [&](CLI::App* sub) {
        sub->add_option("--preset", o.preset, "built-in system preset (paper-2qubit)");
        sub->add_option("--config", o.config_path, "system config JSON file");
        sub->add_option("--set", o.sets,
                        "override a config key, dotted path (e.g. --set beta=0.7); repeatable");
        sub->add_option("--out", o.out_path, "write the main output here instead of stdout");
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--shots", o.shots, "shots per circuit and observable")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "campaign seed");
        sub->add_option("--noise", o.noise_arg, "none | ibm-like | noise JSON file");
    };

    CLI::App* cmd_exact = app.add_subcommand("exact", "closed-form report and symmetry ratio");
    add_system(cmd_exact);
    cmd_exact->add_option("--u", o.u, "counting parameter");
    cmd_exact->add_flag("--dump-config", o.dump_config,
                        "print the canonical full-precision config and exit");

    CLI::App* cmd_estimate = app.add_subcommand("estimate", "one shot-based trial");
    add_system(cmd_estimate);
    cmd_estimate->add_option("--u", o.u, "counting parameter");
    add_sampling(cmd_estimate);

    CLI::App* cmd_campaign =
        app.add_subcommand("campaign", "repeated trials; CSV to --out, summary JSON to stdout");
    add_system(cmd_campaign);
    cmd_campaign->add_option("--u", o.u, "counting parameter");
    add_sampling(cmd_campaign);
    cmd_campaign->add_option("--trials", o.trials, "number of independent trials")
        ->check(CLI::PositiveNumber);

    CLI::App* cmd_sweep = app.add_subcommand("sweep-u", "exact characteristic functions on a u grid");
    add_system(cmd_sweep);
    cmd_sweep->add_option("--u-min", o.u_min, "grid start");
    cmd_sweep->add_option("--u-max", o.u_max, "grid end");
    cmd_sweep->add_option("--u-steps", o.u_steps, "grid size");

    CLI::App* cmd_decompose =
        app.add_subcommand("decompose", "Pauli coefficients of a Boltzmann factor");
    add_system(cmd_decompose);
    cmd_decompose
        ->add_option("which", o.which, "h0: exp(-beta G0); gtau: exp(+beta G_tau)")
        ->required()
        ->check(CLI::IsMember({"h0", "gtau"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (cmd_exact->parsed()) return run_exact(o);
    if (cmd_estimate->parsed()) return run_estimate(o);
    if (cmd_campaign->parsed()) return run_campaign_cmd(o);
    if (cmd_sweep->parsed()) return run_sweep(o);
    if (cmd_decompose->parsed()) return run_decompose(o);
    return 2;  // unreachable under require_subcommand(1)
}
