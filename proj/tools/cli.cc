// Copyright 2026 The eprbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "eprb/analyze.h"
#include "eprb/coincidence.h"
#include "eprb/inequalities.h"
#include "eprb/manifest.h"
#include "eprb/model.h"
#include "eprb/oracles.h"
#include "eprb/results_csv.h"
#include "eprb/scan.h"
#include "eprb/scenarios.h"
#include "eprb/ttag.h"

namespace eprb::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Parameter keys shared by flags (`--key`) and config files (`key = value`).
constexpr const char* kKeys[] = {"d", "t0-ratio", "w-bins", "n", "seed", "theta-grid", "out"};

struct Defaults {
    const char* d = "3";
    const char* t0 = "1000";
    const char* w = "1";
    const char* n = "1000000";
    const char* seed = "42";
};

double to_real(const std::string& key, const std::string& text) {
    const auto v = parse_real(text);
    if (!v) throw UsageError("--" + key + ": expected a number, got '" + text + "'");
    return *v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
    Int v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("--" + key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

std::vector<double> to_angle_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real(key, item));
    if (out.empty()) throw UsageError("--" + key + ": expected a comma-separated list of angles");
    return out;
}

/// Flag values override config-file values, which override defaults.
class Inputs {
  public:
    void add_to(CLI::App& app) {
        for (const char* key : kKeys) {
            options_[key] = app.add_option(std::string("--") + key, flags_[key]);
        }
        options_["d"]->description("delay exponent d (default 3)");
        options_["t0-ratio"]->description("maximum delay T0/tau (default 1000)");
        options_["w-bins"]->description("coincidence window W/tau in tag bins (default 1)");
        options_["n"]->description("number of trials per setting pair (default 1000000)");
        options_["seed"]->description("random seed (default 42)");
        options_["theta-grid"]->description("number of points of the uniform theta grid on [0, pi]");
        options_["out"]->description("output directory");
        app.add_option("--config", config_path_, "flat 'key = value' parameter file")->check(CLI::ExistingFile);
        app.add_flag("--debug-hidden", debug_hidden_, "also write hidden variables (simulate --out only)");
    }

    void load_config() {
        if (config_path_.empty()) return;
        for (const auto& kv : read_key_value_file(config_path_)) {
            if (!options_.contains(kv.key)) {
                throw UsageError(config_path_ + ":" + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
            }
            config_[kv.key] = kv.value;
        }
    }

    bool given(const std::string& key) const { return options_.at(key)->count() > 0 || config_.contains(key); }

    std::optional<std::string> get(const std::string& key) const {
        if (options_.at(key)->count() > 0) return flags_.at(key);
        if (auto it = config_.find(key); it != config_.end()) return it->second;
        return std::nullopt;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        return get(key).value_or(fallback);
    }

    SimParams params() const {
        const Defaults def;
        const auto w = to_int<std::int64_t>("w-bins", get_or("w-bins", def.w));
        try {
            return SimParams(w, to_real("t0-ratio", get_or("t0-ratio", def.t0)),
                             to_real("d", get_or("d", def.d)), to_int<std::uint64_t>("n", get_or("n", def.n)),
                             to_int<std::uint64_t>("seed", get_or("seed", def.seed)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }

    ThetaGrid grid(std::size_t default_points) const {
        const auto n = get("theta-grid") ? to_int<std::size_t>("theta-grid", *get("theta-grid")) : default_points;
        if (n < 2) throw UsageError("--theta-grid: need at least 2 points");
        return ThetaGrid::uniform(n);
    }

    std::optional<fs::path> out_dir() const {
        if (auto o = get("out")) return fs::path(*o);
        return std::nullopt;
    }

    bool debug_hidden() const { return debug_hidden_; }
    bool any_param_given() const {
        for (const char* key : kKeys) {
            if (std::string(key) != "out" && given(key)) return true;
        }
        return false;
    }

  private:
    std::map<std::string, std::string> flags_;
    std::map<std::string, CLI::Option*> options_;
    std::map<std::string, std::string> config_;
    std::string config_path_;
    bool debug_hidden_ = false;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

/// Prints `text` or, with an output directory, writes it to `dir/name`.
void emit(std::ostream& out, const Inputs& in, const std::string& name, const std::string& text) {
    if (auto dir = in.out_dir()) {
        fs::create_directories(*dir);
        write_text(*dir / name, text);
        out << "wrote " << (*dir / name).string() << "\n";
    } else {
        out << text;
    }
}

class KeyValueText {
  public:
    KeyValueText& add(const std::string& key, const std::string& value) {
        text_ += key + " = " + value + "\n";
        return *this;
    }
    KeyValueText& add(const std::string& key, double v) { return add(key, format_real(v)); }
    KeyValueText& add(const std::string& key, const std::optional<double>& v) { return add(key, format_real(v)); }
    KeyValueText& add_int(const std::string& key, std::uint64_t v) { return add(key, std::to_string(v)); }
    KeyValueText& add_flag(const std::string& key, bool v) { return add(key, v ? "1" : "0"); }
    const std::string& str() const { return text_; }

  private:
    std::string text_;
};

void add_estimate(KeyValueText& kv, const CoincidenceCounts& c, const CorrelationEstimate& e) {
    kv.add_int("n_total", c.n_total)
        .add_int("n_coinc", c.n_coinc())
        .add_int("n_pp", c.n_pp)
        .add_int("n_pm", c.n_pm)
        .add_int("n_mp", c.n_mp)
        .add_int("n_mm", c.n_mm)
        .add("e", e.e)
        .add("stderr_e", e.stderr_e)
        .add("e1", e.e1)
        .add("e2", e.e2)
        .add("gamma", e.gamma)
        .add("stderr_gamma", e.stderr_gamma);
}

int cmd_simulate(const Inputs& in, double theta, std::ostream& out) {
    const SimParams p = in.params();
    const auto dir = in.out_dir();
    if (in.debug_hidden() && !dir) throw UsageError("--debug-hidden requires --out");
    const Setting a1 = Setting::z_axis();
    const Setting a2 = Setting::planar(theta);

    KeyValueText kv;
    kv.add("d", p.d())
        .add("t0_ratio", p.t0_ratio())
        .add("w_bins", std::to_string(p.w_bins()))
        .add_int("n_trials", p.n_trials())
        .add_int("seed", p.seed())
        .add("theta", theta);
    if (!dir) {
        const auto counts = simulate_counts(a1, a2, p);
        add_estimate(kv, counts.total(), estimate(counts));
        out << kv.str();
        return kExitOk;
    }

    const auto trials = run_pairs(a1, a2, p, in.debug_hidden());
    const auto counts = tally_blocked(trials, p.w_bins());
    add_estimate(kv, counts.total(), estimate(counts));
    fs::create_directories(*dir);
    write_text(*dir / "estimate.txt", kv.str());
    StationStreams streams;
    export_trials(trials, 0, 0, p, streams);
    write_events(*dir / "events_a.ttag", streams.a);
    write_events(*dir / "events_b.ttag", streams.b);
    if (in.debug_hidden()) {
        CsvTable hidden({"trial", "s_x", "s_y", "s_z", "lambda1", "lambda2"});
        for (const auto& t : trials) {
            const auto& h = *t.hidden;
            hidden.add_row({std::to_string(t.index), format_real(h.s.x), format_real(h.s.y), format_real(h.s.z),
                            format_real(h.lambda1), format_real(h.lambda2)});
        }
        hidden.write(*dir / "hidden.csv");
    }
    out << kv.str();
    return kExitOk;
}

int cmd_sweep(const Inputs& in, std::ostream& out) {
    const SimParams p = in.params();
    const auto grid = in.grid(37);
    emit(out, in, "sweep.csv", sweep_table(sweep_theta(p, grid)).to_string());
    return kExitOk;
}

std::string smax_text(const SReport& r) {
    KeyValueText kv;
    kv.add("s", r.s)
        .add("s_max", r.s_max)
        .add("a", r.quad.a)
        .add("b", r.quad.b)
        .add("c", r.quad.c)
        .add("d", r.quad.d)
        .add("e_ac", r.e_ac)
        .add("e_ad", r.e_ad)
        .add("e_bc", r.e_bc)
        .add("e_bd", r.e_bd)
        .add("gamma_inf", r.gamma_inf)
        .add("gamma_inf_theta", r.gamma_inf_theta)
        .add("gamma_pair_sum", r.gamma_pair_sum)
        .add("bound_trivial", r.bound_trivial)
        .add("bound_chsh", r.bound_chsh)
        .add("bound_lg", r.bound_lg)
        .add_flag("flag_chsh", r.flags.chsh)
        .add_flag("flag_larsson_gill", r.flags.larsson_gill)
        .add_flag("flag_super_quantum", r.flags.super_quantum)
        .add_flag("flag_lg_vacuous", r.flags.lg_vacuous);
    return kv.str();
}

SearchSpec search_spec(const Inputs& in) {
    SearchSpec s;
    if (in.get("theta-grid")) s.grid = in.grid(73);
    return s;
}

int cmd_smax(const Inputs& in, std::ostream& out) {
    const SimParams p = in.params();
    const SearchSpec search = search_spec(in);
    emit(out, in, "smax.txt", smax_text(maximize_S(p, search)));
    return kExitOk;
}

int cmd_fit(const Inputs& in, double target, double tolerance, std::ostream& out, std::ostream& err) {
    const SimParams p = in.params();
    const SearchSpec search = search_spec(in);
    const FitResult f = fit_window(target, p, tolerance, search);
    KeyValueText kv;
    kv.add("target_smax", f.target_smax)
        .add("fitted_w_bins", std::to_string(f.fitted_w_bins))
        .add("achieved_smax", f.achieved_smax)
        .add("gamma_inf", f.gamma_inf)
        .add("gamma_inf_theta", f.gamma_inf_theta)
        .add("gamma_pair_sum", f.gamma_pair_sum)
        .add("iterations", std::to_string(f.iterations))
        .add_flag("converged", f.converged)
        .add_flag("monotone_trace", f.monotone_trace)
        .add_flag("used_fallback", f.used_fallback);
    emit(out, in, "fit.txt", kv.str());
    if (auto dir = in.out_dir()) {
        CsvTable trace({"w_bins", "smax", "gamma_inf"});
        for (const auto& t : f.trace) {
            trace.add_row({std::to_string(t.w_bins), format_real(t.smax), format_real(t.gamma_inf)});
        }
        trace.write(*dir / "fit_trace.csv");
    }
    if (!f.converged) {
        err << "eprbsim: no w-bins reaches S_max within " << format_real(tolerance) << " of the target\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_oracle(const Inputs& in, std::ostream& out) {
    const double d = to_real("d", in.get_or("d", Defaults{}.d));
    if (!(d >= 0.0)) throw UsageError("--d: must be >= 0");
    const auto grid = in.grid(37);
    const LimitCurve curve = gamma_limit_curve(grid, d);
    CsvTable t({"theta", "gamma_limit", "divergent", "quantum_e", "raw_sign_e"});
    const Setting a1 = Setting::z_axis();
    for (std::size_t i = 0; i < curve.theta_grid.size(); ++i) {
        const double th = curve.theta_grid[i];
        t.add_row({format_real(th), format_real(curve.values[i]), curve.values[i] ? "0" : "1",
                   format_real(quantum_E(a1, Setting::planar(th))), format_real(raw_sign_E(th))});
    }
    emit(out, in, "oracle.csv", t.to_string());
    return kExitOk;
}

int cmd_analyze(const Inputs& in, const std::string& file_a, const std::string& file_b, const std::string& settings_a,
                const std::string& settings_b, std::ostream& out) {
    const SettingsTable settings{to_angle_list("settings-a", settings_a), to_angle_list("settings-b", settings_b)};
    const auto w = to_int<std::int64_t>("w-bins", in.get_or("w-bins", Defaults{}.w));
    if (w < 1) throw UsageError("--w-bins: must be >= 1");
    const AnalysisReport r = analyze_external(file_a, file_b, settings, w);

    KeyValueText kv;
    kv.add_int("n_pairs", r.n_pairs)
        .add("gamma_min_over_pairs", r.gamma_min_over_pairs)
        .add("gamma_sum_over_pairs", r.gamma_sum_over_pairs)
        .add("gamma_pooled", r.gamma_pooled)
        .add("s", r.s)
        .add("bound_lg", r.bound_lg);
    if (r.flags) {
        kv.add_flag("flag_chsh", r.flags->chsh)
            .add_flag("flag_larsson_gill", r.flags->larsson_gill)
            .add_flag("flag_super_quantum", r.flags->super_quantum)
            .add_flag("flag_lg_vacuous", r.flags->lg_vacuous);
    }
    CsvTable pairs({"setting_a", "setting_b", "theta", "n_pp", "n_pm", "n_mp", "n_mm", "n_coinc", "n_total", "e",
                    "stderr_e", "gamma"});
    for (const auto& pr : r.pairs) {
        const auto& c = pr.counts;
        pairs.add_row({std::to_string(pr.setting_a), std::to_string(pr.setting_b), format_real(pr.theta),
                       std::to_string(c.n_pp), std::to_string(c.n_pm), std::to_string(c.n_mp),
                       std::to_string(c.n_mm), std::to_string(c.n_coinc()), std::to_string(c.n_total),
                       format_real(pr.estimate.e), format_real(pr.estimate.stderr_e),
                       format_real(pr.estimate.gamma)});
    }
    if (auto dir = in.out_dir()) {
        fs::create_directories(*dir);
        write_text(*dir / "analysis.txt", kv.str());
        pairs.write(*dir / "analysis_pairs.csv");
        out << "wrote " << (*dir / "analysis.txt").string() << "\n"
            << "wrote " << (*dir / "analysis_pairs.csv").string() << "\n";
    } else {
        out << kv.str() << pairs.to_string();
    }
    return kExitOk;
}

ScenarioOverrides overrides_from(const Inputs& in) {
    ScenarioOverrides o;
    if (auto v = in.get("n")) o.n_trials = to_int<std::uint64_t>("n", *v);
    if (auto v = in.get("seed")) o.seed = to_int<std::uint64_t>("seed", *v);
    if (auto v = in.get("d")) o.d = to_real("d", *v);
    if (auto v = in.get("t0-ratio")) o.t0_ratio = to_real("t0-ratio", *v);
    if (auto v = in.get("w-bins")) o.w_bins = to_int<std::int64_t>("w-bins", *v);
    if (auto v = in.get("theta-grid")) o.theta_points = to_int<std::size_t>("theta-grid", *v);
    // Validate through the same rules the model applies.
    try {
        SimParams(o.w_bins.value_or(1), o.t0_ratio.value_or(1000.0), o.d.value_or(3.0), o.n_trials.value_or(1),
                  o.seed.value_or(0));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return o;
}

ScenarioOverrides overrides_from(const RunManifest& m, const std::string& source) {
    ScenarioOverrides o;
    for (const auto& [key, value] : m.params) {
        const std::string k = key;
        try {
            if (k == "n") {
                o.n_trials = to_int<std::uint64_t>(k, value);
            } else if (k == "seed") {
                o.seed = to_int<std::uint64_t>(k, value);
            } else if (k == "d") {
                o.d = to_real(k, value);
            } else if (k == "t0-ratio") {
                o.t0_ratio = to_real(k, value);
            } else if (k == "w-bins") {
                o.w_bins = to_int<std::int64_t>(k, value);
            } else if (k == "theta-grid") {
                o.theta_points = to_int<std::size_t>(k, value);
            } else {
                throw UsageError(source + ": unknown parameter '" + k + "'");
            }
        } catch (const UsageError& e) {
            throw UsageError(source + ": " + e.what());
        }
    }
    return o;
}

int cmd_scenario(const Inputs& in, const std::string& id, const std::string& replay, std::ostream& out,
                 std::ostream& err) {
    const auto dir = in.out_dir();
    if (!dir) throw UsageError("scenario: --out is required");
    const auto& ids = scenario_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        std::string msg = "unknown scenario '" + id + "'; valid ids:";
        for (const auto& s : ids) msg += " " + s;
        throw UsageError(msg);
    }

    std::optional<RunManifest> original;
    ScenarioOverrides o;
    if (!replay.empty()) {
        if (in.any_param_given()) throw UsageError("--replay cannot be combined with parameter flags");
        original = read_manifest(replay);
        if (original->scenario != id) {
            throw UsageError("--replay: manifest is for scenario '" + original->scenario + "', not '" + id + "'");
        }
        o = overrides_from(*original, replay);
    } else {
        o = overrides_from(in);
    }

    const ScenarioOutput result = run_scenario(id, o, *dir);
    for (const auto& t : result.tables) out << "wrote " << t.string() << "\n";
    out << "wrote " << result.manifest.string() << "\n";
    if (original) {
        const auto bad = verify_digests(*original, *dir);
        if (!bad.empty()) {
            for (const auto& name : bad) err << "eprbsim: replay mismatch: " << name << "\n";
            return kExitRuntime;
        }
        out << "replay matches " << original->digests.size() << " digests\n";
    }
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Event-by-event EPRB simulation with time-tag coincidences", "eprbsim"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", tool_version());
    Inputs in;
    in.add_to(app);

    double theta = std::numbers::pi / 2;
    auto* simulate = app.add_subcommand("simulate", "one setting pair: counts and estimate");
    simulate->add_option("--theta", theta, "angle between the two settings (radians)");

    auto* sweep = app.add_subcommand("sweep", "E and gamma over a uniform theta grid");
    auto* smax = app.add_subcommand("smax", "maximum |S| over planar setting quadruples");

    double target = 0.0, tolerance = 0.01;
    auto* fit = app.add_subcommand("fit", "fit w-bins to a target S_max");
    fit->add_option("--target", target, "target S_max")->required();
    fit->add_option("--tolerance", tolerance, "fit tolerance on S_max")->check(CLI::PositiveNumber);

    auto* oracle = app.add_subcommand("oracle", "quadrature limit curve gamma * T0 / W and reference correlations");

    std::string file_a, file_b, settings_a, settings_b;
    auto* analyze = app.add_subcommand("analyze", "analyse two TTAG-CSV station files");
    analyze->add_option("--a", file_a, "station A events")->required()->check(CLI::ExistingFile);
    analyze->add_option("--b", file_b, "station B events")->required()->check(CLI::ExistingFile);
    analyze->add_option("--settings-a", settings_a, "station A setting angles, comma separated")->required();
    analyze->add_option("--settings-b", settings_b, "station B setting angles, comma separated")->required();

    std::string scenario_id, replay;
    auto* scenario = app.add_subcommand("scenario", "named reproducible bundle of tables and manifest");
    scenario->add_option("id", scenario_id, "scenario id")->required();
    scenario->add_option("--replay", replay, "manifest of a previous run to reproduce")->check(CLI::ExistingFile);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        in.load_config();
    } catch (const std::exception& e) {
        err << "eprbsim: config: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(in, theta, out);
        if (sweep->parsed()) return cmd_sweep(in, out);
        if (smax->parsed()) return cmd_smax(in, out);
        if (fit->parsed()) return cmd_fit(in, target, tolerance, out, err);
        if (oracle->parsed()) return cmd_oracle(in, out);
        if (analyze->parsed()) return cmd_analyze(in, file_a, file_b, settings_a, settings_b, out);
        return cmd_scenario(in, scenario_id, replay, out, err);
    } catch (const UsageError& e) {
        err << "eprbsim: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "eprbsim: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace eprb::cli
