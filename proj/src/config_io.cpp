// Copyright 2026 The busqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "busqed/config_io.hpp"

#include "busqed/errors.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace busqed {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(path + "." + key + ": unknown key");
        }
    }
}

const json& require_key(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) {
        throw ConfigError(path + "." + key + ": missing required key");
    }
    return obj.at(key);
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    const json& v = require_key(obj, path, key);
    if (!v.is_number()) {
        throw ConfigError(path + "." + key + ": non-numeric value");
    }
    return v.get<double>();
}

double get_positive(const json& obj, const std::string& path, const std::string& key) {
    const double v = get_number(obj, path, key);
    if (v <= 0.0) {
        throw ConfigError(path + "." + key + ": must be positive");
    }
    return v;
}

double get_nonnegative(const json& obj, const std::string& path, const std::string& key) {
    const double v = get_number(obj, path, key);
    if (v < 0.0) {
        throw ConfigError(path + "." + key + ": must be >= 0");
    }
    return v;
}

Scenario scenario_from_json(const json& root, const std::string& name) {
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(root, "config", {"bus", "resonators", "sim"});

    const json& bus = require_key(root, "config", "bus");
    if (!bus.is_object()) throw ConfigError("bus: must be an object");
    check_keys(bus, "bus", {"freq_ghz", "kappa_inv_us"});

    DeviceConfig device;
    device.bus_omega = ghz_to_rad(get_positive(bus, "bus", "freq_ghz"));
    device.bus_kappa = inv_us_to_rate(get_nonnegative(bus, "bus", "kappa_inv_us"));

    const json& resonators = require_key(root, "config", "resonators");
    if (!resonators.is_array() || resonators.empty()) {
        throw ConfigError("resonators: must be a non-empty array");
    }
    for (std::size_t k = 0; k < resonators.size(); ++k) {
        const std::string path = "resonators[" + std::to_string(k) + "]";
        const json& r = resonators[k];
        if (!r.is_object()) throw ConfigError(path + ": must be an object");
        check_keys(r, path, {"label", "freq_ghz", "g_mhz", "kappa_inv_us"});
        ResonatorSpec spec;
        if (r.contains("label")) {
            if (!r.at("label").is_string()) throw ConfigError(path + ".label: must be a string");
            spec.label = r.at("label").get<std::string>();
        }
        spec.omega = ghz_to_rad(get_positive(r, path, "freq_ghz"));
        spec.g = mhz_to_rad(get_nonnegative(r, path, "g_mhz"));
        spec.kappa = inv_us_to_rate(get_nonnegative(r, path, "kappa_inv_us"));
        device.resonators.push_back(std::move(spec));
    }

    SimSettings settings;
    if (root.contains("sim")) {
        const json& sim = root.at("sim");
        if (!sim.is_object()) throw ConfigError("sim: must be an object");
        check_keys(sim, "sim", {"dt_ns", "t_max_ns", "frame", "fock_dim", "gprime_formula"});
        if (sim.contains("dt_ns")) settings.dt = ns_to_s(get_positive(sim, "sim", "dt_ns"));
        if (sim.contains("t_max_ns")) {
            settings.t_max = ns_to_s(get_positive(sim, "sim", "t_max_ns"));
        }
        if (sim.contains("fock_dim")) {
            const json& v = sim.at("fock_dim");
            if (!v.is_number_integer()) {
                throw ConfigError("sim.fock_dim: must be an integer");
            }
            const int d = v.get<int>();
            if (d < 2) throw ConfigError("sim.fock_dim: must be >= 2");
            settings.fock_dim = d;
        }
        auto get_enum_string = [&](const std::string& key) {
            const json& v = sim.at(key);
            if (!v.is_string()) throw ConfigError("sim." + key + ": must be a string");
            return v.get<std::string>();
        };
        try {
            if (sim.contains("frame")) settings.frame = frame_from_string(get_enum_string("frame"));
            if (sim.contains("gprime_formula")) {
                settings.gprime_formula =
                    gprime_formula_from_string(get_enum_string("gprime_formula"));
            }
        } catch (const ConfigError& e) {
            throw ConfigError("sim: " + std::string(e.what()));
        }
    }
    return standard_scenario(name, std::move(device), settings);
}

json manifest_to_json(const RunManifest& m) {
    json j;
    j["artifact_version"] = m.artifact_version;
    j["scenario"] = m.scenario;
    j["config"] = json::parse(m.config_json);
    j["basis"] = m.basis_kind;
    j["frame"] = m.frame;
    j["gprime_formula"] = m.gprime_formula;
    j["phase_argmax"] = m.phase_argmax;
    json optima = json::array();
    for (const auto& o : m.optima) {
        optima.push_back({{"target", o.label}, {"t_ns", s_to_ns(o.t)}, {"fidelity", o.value}});
    }
    j["optima"] = std::move(optima);
    j["warnings"] = m.warnings;
    j["duration_seconds"] = m.duration_seconds;
    j["outputs"] = m.outputs;
    if (m.gprime_resolution) {
        const auto& g = *m.gprime_resolution;
        j["gprime_resolution"] = {{"winner", to_string(g.winner)},
                                  {"fitted_gprime_mhz", rad_to_mhz(g.fitted_gprime)},
                                  {"paper_gprime_mhz", rad_to_mhz(g.paper_gprime)},
                                  {"half_gprime_mhz", rad_to_mhz(g.half_gprime)},
                                  {"paper_rel_err", g.paper_rel_err},
                                  {"half_rel_err", g.half_rel_err},
                                  {"unique_match", g.unique_match}};
    }
    return j;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Lab-unit values are written rounded to 12 significant digits, so that
// serialize -> parse reproduces the internal rad/s values exactly (the
// conversion residue lives 4 digits further down).
double round12(double v) {
    return std::atof(format_number(v).c_str());
}

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

Scenario parse_config_text(const std::string& text, const std::string& name) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    if (root.is_object() && root.contains("config")) {
        // run manifest: self-contained config plus metadata
        const json& scenario = require_key(root, "manifest", "scenario");
        if (!scenario.is_string()) throw ConfigError("manifest.scenario: must be a string");
        return scenario_from_json(root.at("config"), scenario.get<std::string>());
    }
    return scenario_from_json(root, name);
}

Scenario parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), std::filesystem::path(path).stem().string());
}

std::string serialize_config(const Scenario& s) {
    json root;
    root["bus"] = {{"freq_ghz", round12(rad_to_ghz(s.device.bus_omega))},
                   {"kappa_inv_us", round12(rate_to_inv_us(s.device.bus_kappa))}};
    json resonators = json::array();
    for (const auto& r : s.device.resonators) {
        resonators.push_back({{"label", r.label},
                              {"freq_ghz", round12(rad_to_ghz(r.omega))},
                              {"g_mhz", round12(rad_to_mhz(r.g))},
                              {"kappa_inv_us", round12(rate_to_inv_us(r.kappa))}});
    }
    root["resonators"] = std::move(resonators);
    root["sim"] = {{"dt_ns", round12(s_to_ns(s.integrator.dt))},
                   {"t_max_ns", round12(s_to_ns(s.integrator.t_max))},
                   {"frame", to_string(s.frame)},
                   {"fock_dim", s.device.bus_fock_dim},
                   {"gprime_formula", to_string(s.gprime_formula)}};
    return root.dump(2) + "\n";
}

RunManifest make_manifest(const Scenario& s, const ScenarioResult& r) {
    RunManifest m;
    m.scenario = s.name;
    m.config_json = serialize_config(s);
    m.basis_kind = r.sector_basis ? "sector" : "full";
    m.frame = to_string(r.frame);
    m.gprime_formula = to_string(r.gprime_formula);
    m.phase_argmax = r.best_target >= 0 ? r.optima[r.best_target].label : "";
    m.optima = r.optima;
    m.warnings = r.warnings;
    m.duration_seconds = r.wall_seconds;
    return m;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest '" + path + "'");
    out << manifest_to_json(m).dump(2) << "\n";
    if (!out) throw ConfigError("I/O failure writing manifest '" + path + "'");
}

void emit_timeseries(const ScenarioResult& r, const std::string& path, OutputFormat format) {
    emit_timeseries(r, path, format, make_manifest(Scenario{}, r));
}

void emit_timeseries(const ScenarioResult& r, const std::string& path, OutputFormat format,
                     const RunManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    const TimeSeries& ts = r.series;
    if (format == OutputFormat::csv) {
        out << "t_ns";
        for (const auto& label : ts.labels) out << "," << label;
        out << "\n";
        for (std::size_t i = 0; i < ts.num_samples(); ++i) {
            out << format_number(s_to_ns(ts.times[i]));
            for (const auto& col : ts.columns) out << "," << format_number(col[i]);
            out << "\n";
        }
    } else {
        json j;
        j["scenario"] = r.scenario_name;
        j["manifest"] = manifest_to_json(manifest);
        json columns;
        json times = json::array();
        for (const double t : ts.times) times.push_back(s_to_ns(t));
        columns["t_ns"] = std::move(times);
        for (std::size_t k = 0; k < ts.labels.size(); ++k) {
            columns[ts.labels[k]] = ts.columns[k];
        }
        j["columns"] = std::move(columns);
        out << j.dump(2) << "\n";
    }
    if (!out) throw ConfigError("I/O failure writing '" + path + "'");
}

namespace {

struct CliOverrides {
    std::string output_dir;
    double dt_ns = 0.0;     // 0 = not set
    double t_max_ns = 0.0;  // 0 = not set
    std::string frame;
    std::string formula;
    std::string format = "csv";
};

void apply_overrides(Scenario& s, const CliOverrides& o) {
    if (o.dt_ns != 0.0) s.integrator.dt = ns_to_s(o.dt_ns);
    if (o.t_max_ns != 0.0) s.integrator.t_max = ns_to_s(o.t_max_ns);
    if (!o.frame.empty()) s.frame = frame_from_string(o.frame);
    if (!o.formula.empty()) s.gprime_formula = gprime_formula_from_string(o.formula);
}

Scenario resolve_scenario(const std::string& name, const std::string& config_path) {
    if (!name.empty() && !config_path.empty()) {
        throw ConfigError("give either a scenario name or --config, not both");
    }
    if (!name.empty()) return builtin_scenario(name);
    if (!config_path.empty()) return parse_config(config_path);
    throw ConfigError("run needs a scenario name or --config PATH");
}

void print_summary(const ScenarioResult& r) {
    std::cout << r.scenario_name << ": " << (r.sector_basis ? "sector" : "full") << " basis, dim "
              << r.basis_dim << ", dt " << s_to_ns(r.dt) << " ns, t_max " << s_to_ns(r.t_max)
              << " ns\n";
    char line[160];
    for (std::size_t k = 0; k < r.optima.size(); ++k) {
        const auto& o = r.optima[k];
        std::snprintf(line, sizeof line, "  F_%s: F_max = %.6f at t* = %.3f ns%s",
                      o.label.c_str(), o.value, s_to_ns(o.t),
                      static_cast<int>(k) == r.best_target ? "  <-- argmax" : "");
        std::cout << line << "\n";
    }
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (const char c : s) {
        out += (std::isalnum(static_cast<unsigned char>(c)) != 0) ? c : '_';
    }
    return out;
}

int run_command(const std::string& name, const std::string& config_path, const CliOverrides& o) {
    Scenario s = resolve_scenario(name, config_path);
    apply_overrides(s, o);
    std::filesystem::create_directories(o.output_dir);
    const ScenarioResult r = run_scenario(s);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    print_summary(r);

    const OutputFormat format = output_format_from_string(o.format);
    const std::string ext = format == OutputFormat::csv ? ".csv" : ".json";
    const std::string ts_path = o.output_dir + "/" + s.name + "_timeseries" + ext;
    const std::string mf_path = o.output_dir + "/" + s.name + "_manifest.json";
    RunManifest m = make_manifest(s, r);
    m.outputs = {ts_path};
    emit_timeseries(r, ts_path, format, m);
    write_manifest(m, mf_path);
    std::cout << "wrote " << ts_path << "\n" << "wrote " << mf_path << "\n";
    return 0;
}

int sweep_command(const std::string& name, const std::string& config_path, const CliOverrides& o,
                  const std::string& param, const std::vector<double>& values) {
    Scenario base = resolve_scenario(name, config_path);
    apply_overrides(base, o);
    std::filesystem::create_directories(o.output_dir);
    const OutputFormat format = output_format_from_string(o.format);
    const std::string ext = format == OutputFormat::csv ? ".csv" : ".json";

    for (const double v : values) {
        Scenario s = with_parameter(base, param, v);
        s.name = base.name + "_" + sanitize(param) + "_" + sanitize(format_number(v));
        const ScenarioResult r = run_scenario(s);
        std::cout << param << " = " << format_number(v) << ":\n";
        print_summary(r);
        const std::string ts_path = o.output_dir + "/" + s.name + "_timeseries" + ext;
        const std::string mf_path = o.output_dir + "/" + s.name + "_manifest.json";
        RunManifest m = make_manifest(s, r);
        m.outputs = {ts_path};
        emit_timeseries(r, ts_path, format, m);
        write_manifest(m, mf_path);
    }
    return 0;
}

int check_command() {
    int failures = 0;
    auto report = [&](const std::string& what, bool ok, const std::string& detail) {
        std::cout << (ok ? "ok   " : "FAIL ") << what;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    for (const auto& name : builtin_scenario_names()) {
        const Scenario s = builtin_scenario(name);
        const ScenarioResult r = run_scenario(s);
        const auto& p = r.physicality;
        const bool phys_ok = p.max_trace_deviation <= 1e-8 &&
                             p.max_hermiticity_drift <= 1e-10 && p.min_eigenvalue >= -1e-9 &&
                             p.max_excitation_increase <= 1e-10;
        char detail[200];
        std::snprintf(detail, sizeof detail,
                      "trace dev %.2e, herm %.2e, min eig %.2e, excitation jump %.2e",
                      p.max_trace_deviation, p.max_hermiticity_drift, p.min_eigenvalue,
                      p.max_excitation_increase);
        report(name + " physicality", phys_ok, detail);

        const ConvergenceReport conv = scenario_convergence(s);
        std::snprintf(detail, sizeof detail, "max deviation %.2e at dt/2", conv.max_deviation);
        report(name + " convergence", conv.passed, detail);
    }

    const GPrimeResolution res =
        resolve_gprime_formula(builtin_scenario("trq_fig2").device, {0, 1});
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "winner %s, fitted |g'|/2pi = %.3f MHz (paper err %.1f%%, half err %.1f%%)",
                  to_string(res.winner).c_str(), rad_to_mhz(res.fitted_gprime),
                  100.0 * res.paper_rel_err, 100.0 * res.half_rel_err);
    report("g' formula resolution", res.unique_match, detail);

    return failures == 0 ? 0 : 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"open quantum dynamics of resonator networks on a common bus"};
    app.require_subcommand(1);

    CliOverrides o;
    o.output_dir = ".";
    if (const char* env = std::getenv("BUSQED_OUTPUT_DIR")) o.output_dir = env;

    std::string scenario_name;
    std::string config_path;
    std::string sweep_param;
    std::vector<double> sweep_values;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_name, "builtin scenario name");
        cmd->add_option("--config", config_path, "JSON config file or run manifest");
        cmd->add_option("--output", o.output_dir, "output directory");
        cmd->add_option("--dt-ns", o.dt_ns, "integrator step (ns)");
        cmd->add_option("--t-max-ns", o.t_max_ns, "evolution length (ns)");
        cmd->add_option("--frame", o.frame, "lab | interaction | effective");
        cmd->add_option("--gprime-formula", o.formula, "paper | half");
        cmd->add_option("--format", o.format, "csv | json");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario, write timeseries + manifest");
    add_common(run_cmd);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "independent runs over a parameter");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--param", sweep_param, "parameter path, e.g. kappa_inv_us")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');

    CLI::App* list_cmd = app.add_subcommand("list-scenarios", "list builtin scenarios");
    CLI::App* check_cmd =
        app.add_subcommand("check", "convergence and physicality suite on builtin scenarios");

    std::vector<std::string> argv_store;
    argv_store.push_back("busqed");
    for (const auto& a : args) argv_store.push_back(a);
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (list_cmd->parsed()) {
            for (const auto& name : builtin_scenario_names()) std::cout << name << "\n";
            return 0;
        }
        if (check_cmd->parsed()) return check_command();
        if (run_cmd->parsed()) return run_command(scenario_name, config_path, o);
        if (sweep_cmd->parsed()) {
            return sweep_command(scenario_name, config_path, o, sweep_param, sweep_values);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IntegratorError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace busqed
