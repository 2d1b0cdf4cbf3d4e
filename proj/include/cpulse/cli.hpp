// Copyright 2026 The cpulse Authors
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

#pragma once

// The `cpulse` command line. Kept in a header so tests can drive it
// in-process through run().

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpulse/noise.hpp"
#include "cpulse/scan.hpp"
#include "cpulse/sequences.hpp"
#include "cpulse/solver.hpp"
#include "cpulse/svg.hpp"

namespace cpulse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

/// Bad flags, unknown labels, formats that do not fit the command.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Command { Profile, Scan2d, Solve, List, ExportSeq };

struct RunConfig {
    Command command = Command::Profile;

    // sequence selectors
    std::vector<std::string> seq;  ///< compact selectors, e.g. "bb:5", "theta-nb:4:0.3"
    std::string family;
    int n = 0;
    int inner_n = 0;
    std::string p;
    std::string label;
    std::string universal;
    std::vector<std::string> seq_files;

    // grid
    std::string grid;
    std::string grid2d;
    std::string delta_grid;
    double delta = 0.0;
    std::string refine;
    double refine_width = 0.1;
    int refine_points = 2001;

    std::string noise = "off";
    std::string out;
    std::vector<std::string> format;
    std::string reference;
    std::string title;
    int columns = 0;
    std::uint64_t seed = 1;

    // solve
    std::string pulse_template = "theta";
    std::string expansion;
    int conditions = 0;
    int restarts = 64;
};

namespace detail {

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string &s, const std::string &what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument("");
        }
        return v;
    } catch (const std::exception &) {
        throw UsageError(what + ": '" + s + "' is not a number");
    }
}

inline int parse_int(const std::string &s, const std::string &what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument("");
        }
        return v;
    } catch (const std::exception &) {
        throw UsageError(what + ": '" + s + "' is not an integer");
    }
}

struct Range {
    double lo;
    double hi;
    int points;
};

/// "a:b:points"
inline Range parse_range(const std::string &s, const std::string &what) {
    auto parts = split(s, ':');
    if (parts.size() != 3) {
        throw UsageError(what + " expects a:b:points, got '" + s + "'");
    }
    return {parse_double(parts[0], what), parse_double(parts[1], what), parse_int(parts[2], what)};
}

inline std::vector<double> parse_targets(const std::string &s) {
    if (s.empty()) {
        throw UsageError("theta families need --p (a table target or '*')");
    }
    if (s == "*") {
        return {tables::kThetaTargets.begin(), tables::kThetaTargets.end()};
    }
    return {parse_double(s, "--p")};
}

inline std::string family_tokens() {
    return "bb, nb, pb-bn, pb-nb, universal, theta-bb, theta-nb, theta-pb, single";
}

inline std::string universal_list() {
    std::string valid;
    for (const auto &l : universal_labels()) {
        valid += (valid.empty() ? "" : ", ") + l;
    }
    return valid;
}

inline int require_n(int n, const std::string &family) {
    if (n <= 0) {
        throw UsageError("family " + family + " needs a positive pulse count");
    }
    return n;
}

/// One family token plus its numeric arguments; throws UsageError for
/// anything the constructors reject.
inline std::vector<Sequence> build(const std::string &family, int n, int inner_n, const std::string &p,
                                   const std::string &label) {
    std::vector<Sequence> out;
    try {
        if (family == "single") {
            out.push_back(single_pi());
        } else if (family == "bb") {
            out.push_back(bb(require_n(n, family)));
        } else if (family == "nb") {
            out.push_back(nb(require_n(n, family)));
        } else if (family == "pb-bn") {
            out.push_back(pb_b_of_n(require_n(n, family), require_n(inner_n, family)));
        } else if (family == "pb-nb") {
            out.push_back(pb_n_of_b(require_n(n, family), require_n(inner_n, family)));
        } else if (family == "universal") {
            bool known = false;
            for (const auto &l : universal_labels()) {
                known = known || l == label;
            }
            if (!known) {
                throw UsageError("unknown universal label '" + label + "'; valid labels: " + universal_list());
            }
            out.push_back(universal(label));
        } else if (family == "theta-bb" || family == "theta-nb" || family == "theta-pb") {
            require_n(n, family);
            for (double target : parse_targets(p)) {
                if (family == "theta-bb") {
                    out.push_back(theta_bb(n, target));
                } else if (family == "theta-nb") {
                    out.push_back(theta_nb(n, target));
                } else {
                    if (n % 2 != 0) {
                        throw UsageError("theta-pb pulse count must be even");
                    }
                    out.push_back(theta_pb(n / 2, target));
                }
            }
        } else {
            throw UsageError("unknown family '" + family + "'; valid families: " + family_tokens());
        }
    } catch (const UsageError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    return out;
}

/// Compact selector: "single", "bb:5", "pb-bn:3:15", "universal:U5a",
/// "theta-bb:4:0.3", "theta-pb:8:*".
inline std::vector<Sequence> parse_selector(const std::string &s) {
    auto parts = split(s, ':');
    const std::string &family = parts[0];
    auto arg = [&](std::size_t i) -> std::string {
        if (i >= parts.size()) {
            throw UsageError("selector '" + s + "' is missing a field");
        }
        return parts[i];
    };
    std::size_t expected = 1;
    std::vector<Sequence> out;
    if (family == "single") {
        out = build(family, 0, 0, "", "");
    } else if (family == "bb" || family == "nb") {
        expected = 2;
        out = build(family, parse_int(arg(1), s), 0, "", "");
    } else if (family == "pb-bn" || family == "pb-nb") {
        expected = 3;
        out = build(family, parse_int(arg(1), s), parse_int(arg(2), s), "", "");
    } else if (family == "universal") {
        expected = 2;
        out = build(family, 0, 0, "", arg(1));
    } else if (family.starts_with("theta-")) {
        expected = 3;
        out = build(family, parse_int(arg(1), s), 0, arg(2), "");
    } else {
        throw UsageError("unknown family '" + family + "' in selector '" + s + "'; valid families: " +
                         family_tokens());
    }
    if (parts.size() != expected) {
        throw UsageError("selector '" + s + "' has extra fields");
    }
    return out;
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<Sequence> load_sequences(const std::string &path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
    std::vector<Sequence> out;
    try {
        if (j.is_array()) {
            for (const auto &item : j) {
                out.push_back(sequence_from_json(item));
            }
        } else {
            out.push_back(sequence_from_json(j));
        }
    } catch (const nlohmann::json::exception &e) {
        throw UsageError("'" + path + "' is not a sequence document: " + e.what());
    } catch (const std::invalid_argument &e) {
        throw UsageError("'" + path + "': " + e.what());
    }
    return out;
}

inline std::vector<Sequence> resolve_sequences(const RunConfig &cfg) {
    std::vector<Sequence> out;
    for (const auto &s : cfg.seq) {
        auto more = parse_selector(s);
        out.insert(out.end(), more.begin(), more.end());
    }
    if (!cfg.universal.empty()) {
        auto more = build("universal", 0, 0, "", cfg.universal);
        out.insert(out.end(), more.begin(), more.end());
    }
    if (!cfg.family.empty()) {
        auto more = build(cfg.family, cfg.n, cfg.inner_n, cfg.p, cfg.label);
        out.insert(out.end(), more.begin(), more.end());
    }
    for (const auto &f : cfg.seq_files) {
        auto more = load_sequences(f);
        out.insert(out.end(), more.begin(), more.end());
    }
    if (out.empty()) {
        throw UsageError("no sequence selected (use --family, --seq, --universal or --seq-file)");
    }
    return out;
}

inline std::optional<NoiseParams> resolve_noise(const std::string &spec) {
    if (spec == "off") {
        return std::nullopt;
    }
    if (spec == "default") {
        return NoiseParams::defaults();
    }
    if (spec.starts_with("file=")) {
        std::string path = spec.substr(5);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(path));
            if (j.contains("noise")) {
                j = j.at("noise");
            }
            return noise_params_from_json(j);
        } catch (const nlohmann::json::exception &e) {
            throw UsageError("noise file '" + path + "': " + e.what());
        } catch (const UsageError &) {
            throw;
        } catch (const std::invalid_argument &e) {
            throw UsageError("noise file '" + path + "': " + e.what());
        }
    }
    throw UsageError("--noise expects off, default or file=PATH");
}

inline GridSpec resolve_grid(const RunConfig &cfg) {
    GridSpec g = cfg.command == Command::Scan2d ? GridSpec::default_2d() : GridSpec::default_1d();
    if (cfg.command == Command::Profile) {
        g.delta_min = g.delta_max = cfg.delta;
    }
    if (!cfg.grid2d.empty()) {
        if (cfg.command != Command::Scan2d) {
            throw UsageError("--grid2d only applies to scan2d");
        }
        auto parts = split(cfg.grid2d, ',');
        if (parts.size() != 2) {
            throw UsageError("--grid2d expects eps_a:eps_b:n,delta_a:delta_b:m");
        }
        auto e = parse_range(parts[0], "--grid2d");
        auto d = parse_range(parts[1], "--grid2d");
        g.eps_min = e.lo;
        g.eps_max = e.hi;
        g.eps_points = e.points;
        g.delta_min = d.lo;
        g.delta_max = d.hi;
        g.delta_points = d.points;
    }
    if (!cfg.grid.empty()) {
        auto e = parse_range(cfg.grid, "--grid");
        g.eps_min = e.lo;
        g.eps_max = e.hi;
        g.eps_points = e.points;
    }
    if (!cfg.delta_grid.empty()) {
        if (cfg.command != Command::Scan2d) {
            throw UsageError("--delta-grid only applies to scan2d");
        }
        auto d = parse_range(cfg.delta_grid, "--delta-grid");
        g.delta_min = d.lo;
        g.delta_max = d.hi;
        g.delta_points = d.points;
    }
    if (!cfg.refine.empty()) {
        if (cfg.refine != "center") {
            throw UsageError("--refine only supports 'center'");
        }
        g.refine = Refinement{cfg.refine_width, cfg.refine_points};
    }
    try {
        g.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    return g;
}

inline std::string sanitize(const std::string &label) {
    std::string out;
    for (char c : label) {
        bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '-' || c == '_';
        if (keep) {
            out += c;
        } else if (c == '(' || c == '=') {
            out += '_';
        }
    }
    return out;
}

/// Output destinations. A known extension on --out is dropped and the
/// format's own extension appended; several sequences in CSV get one file
/// per sequence with a label suffix.
struct Sink {
    std::string base;
    std::ostream *console = nullptr;

    bool to_console() const { return base.empty(); }

    void write(const std::string &suffix, const std::string &ext, const std::string &content) const {
        if (to_console()) {
            *console << content;
            return;
        }
        std::filesystem::path path(base + suffix + "." + ext);
        if (path.has_parent_path()) {
            std::filesystem::create_directories(path.parent_path());
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
        f << content;
    }
};

inline Sink make_sink(const std::string &out, std::ostream &console) {
    std::string base = out;
    for (const char *ext : {".csv", ".json", ".svg"}) {
        if (base.ends_with(ext)) {
            base.resize(base.size() - std::string(ext).size());
            break;
        }
    }
    return {base, &console};
}

inline std::vector<std::string> resolve_formats(const RunConfig &cfg, std::vector<std::string> allowed,
                                                const std::string &fallback) {
    std::vector<std::string> formats = cfg.format.empty() ? std::vector<std::string>{fallback} : cfg.format;
    for (const auto &f : formats) {
        if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
            std::string list;
            for (const auto &a : allowed) {
                list += (list.empty() ? "" : ", ") + a;
            }
            throw UsageError("format '" + f + "' is not valid here (allowed: " + list + ")");
        }
    }
    return formats;
}

inline std::string panel_key(const Sequence &s) {
    std::string key(family_name(s.family));
    if (is_theta_family(s.family)) {
        key += " N=" + std::to_string(s.n_pulses());
    }
    return key;
}

inline std::string render_svg(const RunConfig &cfg, const std::vector<Sequence> &seqs,
                              const std::vector<std::vector<ProfileRecord>> &runs, const GridSpec &grid, bool noisy) {
    svg::Style style;
    style.title = cfg.title;
    if (grid.delta_points > 1) {
        std::vector<svg::Heatmap> maps;
        auto eps = epsilon_axis(grid);
        auto del = delta_axis(grid);
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            std::vector<double> values;
            values.reserve(runs[i].size());
            for (const auto &r : runs[i]) {
                values.push_back(record_probability(r, noisy));
            }
            maps.push_back({seqs[i].label + (noisy ? " (noisy)" : ""), eps, del, values});
        }
        style.columns = cfg.columns > 0 ? cfg.columns : static_cast<int>(std::min<std::size_t>(maps.size(), 4));
        style.panel_width = 300;
        style.panel_height = 300;
        return svg::emit_heatmaps(maps, style);
    }
    std::vector<svg::LinePanel> panels;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        auto key = panel_key(seqs[i]);
        if (!index.contains(key)) {
            index[key] = panels.size();
            panels.push_back({key, {}});
        }
        auto &panel = panels[index[key]];
        std::vector<double> x;
        std::vector<double> ideal;
        std::vector<double> measured;
        for (const auto &r : runs[i]) {
            x.push_back(r.epsilon);
            ideal.push_back(r.probability_ideal);
            if (noisy) {
                measured.push_back(*r.probability_noisy);
            }
        }
        panel.curves.push_back({seqs[i].label, x, ideal, false});
        if (noisy) {
            panel.curves.push_back({seqs[i].label + " noisy", x, measured, false});
        }
    }
    if (cfg.reference == "single") {
        ScanOptions plain;
        auto ref = scan_1d(single_pi(), grid, plain);
        std::vector<double> x;
        std::vector<double> y;
        for (const auto &r : ref) {
            x.push_back(r.epsilon);
            y.push_back(r.probability_ideal);
        }
        for (auto &panel : panels) {
            panel.curves.push_back({"single pulse", x, y, true});
        }
    } else if (!cfg.reference.empty()) {
        throw UsageError("--reference only supports 'single'");
    }
    style.columns = cfg.columns > 0 ? cfg.columns : static_cast<int>(std::min<std::size_t>(panels.size(), 2));
    return svg::emit_lines(panels, style);
}

inline int run_scan(const RunConfig &cfg, std::ostream &out) {
    auto seqs = resolve_sequences(cfg);
    auto grid = resolve_grid(cfg);
    auto formats = resolve_formats(cfg, {"csv", "json", "svg"}, "csv");
    auto sink = make_sink(cfg.out, out);
    bool many_files = formats.size() > 1 || (seqs.size() > 1 && formats[0] == "csv");
    if (sink.to_console() && many_files) {
        throw UsageError("several outputs requested; pass --out");
    }
    ScanOptions opt;
    opt.noise = resolve_noise(cfg.noise);
    std::vector<std::vector<ProfileRecord>> runs;
    for (const auto &s : seqs) {
        runs.push_back(grid.delta_points > 1 ? scan_2d(s, grid, opt) : scan_1d(s, grid, opt));
    }
    for (const auto &f : formats) {
        if (f == "csv") {
            for (std::size_t i = 0; i < seqs.size(); ++i) {
                std::ostringstream os;
                write_csv(os, runs[i]);
                sink.write(seqs.size() > 1 ? "_" + sanitize(seqs[i].label) : "", "csv", os.str());
            }
        } else if (f == "json") {
            nlohmann::json doc{{"noise", opt.noise ? noise_params_to_json(*opt.noise) : nlohmann::json(nullptr)},
                               {"runs", nlohmann::json::array()}};
            for (std::size_t i = 0; i < seqs.size(); ++i) {
                doc["runs"].push_back({{"sequence", sequence_to_json(seqs[i])}, {"records", records_to_json(runs[i])}});
            }
            sink.write("", "json", doc.dump(1) + "\n");
        } else {
            sink.write("", "svg", render_svg(cfg, seqs, runs, grid, opt.noise.has_value()));
        }
    }
    return kExitOk;
}

inline int run_solve(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    resolve_formats(cfg, {"json"}, "json");
    SolveProblem pr;
    if (cfg.pulse_template == "pi") {
        pr.pulse_template = PulseTemplate::PiOnly;
    } else if (cfg.pulse_template == "theta") {
        pr.pulse_template = PulseTemplate::Theta;
    } else {
        throw UsageError("--template expects pi or theta");
    }
    pr.n_pulses = cfg.n;
    bool pi = pr.pulse_template == PulseTemplate::PiOnly;
    pr.target_p = cfg.p.empty() ? (pi ? 1.0 : -1.0) : parse_double(cfg.p, "--p");
    if (pr.target_p < 0) {
        throw UsageError("solve with the theta template needs --p");
    }
    std::string expansion = cfg.expansion.empty() ? "zero-error" : cfg.expansion;
    if (expansion == "zero-error") {
        pr.expansion = ExpansionPoint::ZeroError;
    } else if (expansion == "zero-field") {
        pr.expansion = ExpansionPoint::ZeroField;
    } else {
        throw UsageError("--expansion expects zero-error or zero-field");
    }
    if (cfg.conditions > 0) {
        pr.n_conditions = cfg.conditions;
    } else if (pi) {
        pr.n_conditions = cfg.n;
    } else {
        pr.n_conditions = pr.expansion == ExpansionPoint::ZeroError ? cfg.n - 1 : cfg.n / 2;
    }
    try {
        pr.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    SolveOptions opt;
    opt.restarts = cfg.restarts;
    opt.seed = cfg.seed;
    if (opt.restarts < 1) {
        throw UsageError("--restarts must be >= 1");
    }
    auto result = solve(pr, opt);
    auto sink = make_sink(cfg.out, out);
    sink.write("", "json", solve_report_json(pr, opt, result).dump(1) + "\n");
    if (!result.converged) {
        err << "solve: no start converged (best residual " << result.residual_norm << ")\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

inline int run_list(std::ostream &out) {
    out << "families: " << family_tokens() << "\n";
    out << "universal labels: " << universal_list() << "\n";
    auto cols = [&](const char *name, const std::vector<tables::ThetaColumn> &c, int scale) {
        out << name << " N:";
        for (const auto &col : c) {
            out << ' ' << col.n_pulses * scale;
        }
        out << "\n";
    };
    cols("theta-bb", tables::theta_bb_columns(), 1);
    cols("theta-nb", tables::theta_nb_columns(), 1);
    cols("theta-pb", tables::theta_nb_columns(), 2);
    out << "theta targets p:";
    for (double p : tables::kThetaTargets) {
        out << ' ' << p;
    }
    out << "\n";
    return kExitOk;
}

inline int run_export(const RunConfig &cfg, std::ostream &out) {
    resolve_formats(cfg, {"json"}, "json");
    auto seqs = resolve_sequences(cfg);
    nlohmann::json doc;
    if (seqs.size() == 1) {
        doc = sequence_to_json(seqs[0]);
    } else {
        doc = nlohmann::json::array();
        for (const auto &s : seqs) {
            doc.push_back(sequence_to_json(s));
        }
    }
    make_sink(cfg.out, out).write("", "json", doc.dump(1) + "\n");
    return kExitOk;
}

inline void add_selector_options(CLI::App *app, RunConfig &cfg) {
    app->add_option("--seq", cfg.seq, "compact selector, repeatable (bb:5, pb-bn:3:15, theta-nb:4:0.3, theta-bb:4:*)");
    app->add_option("--family", cfg.family, "bb, nb, pb-bn, pb-nb, universal, theta-bb, theta-nb, theta-pb, single");
    app->add_option("--inner-n", cfg.inner_n, "inner block length for pb-bn / pb-nb");
    app->add_option("--label", cfg.label, "universal sequence label");
    app->add_option("--universal", cfg.universal, "universal sequence label (shorthand)");
    app->add_option("--seq-file", cfg.seq_files, "sequence JSON written by export-seq");
}

inline void add_output_options(CLI::App *app, RunConfig &cfg) {
    app->add_option("--out", cfg.out, "output path; extension chosen by format");
    app->add_option("--format", cfg.format, "csv, json or svg; repeatable")->delimiter(',');
}

}  // namespace detail

/// Parses `args` (without the program name) and executes. Never throws.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    using namespace detail;
    RunConfig cfg;
    CLI::App app{"cpulse: composite pulse profiles, tables and phase solving"};
    app.set_config("--config", "", "TOML file; command-line flags override it");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto *profile = app.add_subcommand("profile", "1D profile p(eps) at fixed detuning");
    auto *scan2d = app.add_subcommand("scan2d", "2D map p(eps, delta)");
    auto *solve_cmd = app.add_subcommand("solve", "phases for a target by multi-start root finding");
    auto *list = app.add_subcommand("list", "families, labels and table entries");
    auto *export_seq = app.add_subcommand("export-seq", "sequence as JSON");

    for (auto *sub : {profile, scan2d, solve_cmd, export_seq}) {
        sub->add_option("--n", cfg.n, "pulse count (outer count for pb families)");
        sub->add_option("--p", cfg.p, "target transition probability; '*' for every table target");
        sub->add_option("--seed", cfg.seed, "random seed (used by solve)");
        add_output_options(sub, cfg);
    }
    for (auto *sub : {profile, scan2d, export_seq}) {
        add_selector_options(sub, cfg);
    }
    for (auto *sub : {profile, scan2d}) {
        sub->add_option("--grid", cfg.grid, "eps axis a:b:points");
        sub->add_option("--noise", cfg.noise, "off, default or file=PATH");
        sub->add_option("--refine", cfg.refine, "center: add a dense block around eps = 0");
        sub->add_option("--refine-width", cfg.refine_width, "half width of the refinement block");
        sub->add_option("--refine-points", cfg.refine_points, "points in the refinement block");
        sub->add_option("--reference", cfg.reference, "single: overlay the single-pulse profile");
        sub->add_option("--title", cfg.title, "SVG title");
        sub->add_option("--columns", cfg.columns, "SVG panels per row");
    }
    profile->add_option("--delta", cfg.delta, "detuning (units of Rabi frequency)");
    scan2d->add_option("--grid2d", cfg.grid2d, "eps_a:eps_b:n,delta_a:delta_b:m");
    scan2d->add_option("--delta-grid", cfg.delta_grid, "delta axis a:b:points");
    solve_cmd->add_option("--template", cfg.pulse_template, "pi or theta");
    solve_cmd->add_option("--expansion", cfg.expansion, "zero-error or zero-field");
    solve_cmd->add_option("--conditions", cfg.conditions, "number of conditions imposed");
    solve_cmd->add_option("--restarts", cfg.restarts, "multi-start budget");

    for (auto *sub : {profile, scan2d, solve_cmd, list, export_seq}) {
        sub->configurable();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        std::ostringstream o;
        std::ostringstream e2;
        int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (profile->parsed()) {
            cfg.command = Command::Profile;
            return run_scan(cfg, out);
        }
        if (scan2d->parsed()) {
            cfg.command = Command::Scan2d;
            return run_scan(cfg, out);
        }
        if (solve_cmd->parsed()) {
            cfg.command = Command::Solve;
            return run_solve(cfg, out, err);
        }
        if (export_seq->parsed()) {
            cfg.command = Command::ExportSeq;
            return run_export(cfg, out);
        }
        cfg.command = Command::List;
        return run_list(out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace cpulse::cli
