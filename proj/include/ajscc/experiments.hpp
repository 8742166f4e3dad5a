#pragma once

// Experiment harness: named experiments with flat string settings, seeded
// runs and CSV tables plus a manifest that can be fed back as a config file.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <utility>
#include <vector>

#include "ajscc/errors.hpp"
#include "ajscc/fm_channel.hpp"
#include "ajscc/kde_kld.hpp"
#include "ajscc/mosfet.hpp"
#include "ajscc/parallel.hpp"
#include "ajscc/phi_optimizer.hpp"
#include "ajscc/precircuit.hpp"
#include "ajscc/slope_decoder.hpp"
#include "ajscc/source_field.hpp"

namespace ajscc {

inline constexpr std::string_view version = "0.1.0";

inline constexpr std::array<std::string_view, 5> experiment_names{"rmse-sweep", "estimate-accuracy", "phi-opt",
                                                                  "snr-bw", "power"};

using Settings = std::map<std::string, std::string>;

struct ExperimentSpec {
    std::string name;
    std::uint64_t seed = 1;
    Settings overrides;
    std::filesystem::path output_dir = ".";
};

// ---------------------------------------------------------------- formatting

/// Shortest round-trip decimal form; identical on every run and platform
/// with a conforming to_chars.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (std::abs(v) < 1e15 && v == std::trunc(v)) return std::to_string(static_cast<long long>(v));
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw Error("format_number: conversion failed");
    return {buf, end};
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }

struct Table {
    std::string file_name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string to_csv() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return out;
    }
};

// ------------------------------------------------------------------ parsing

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
        throw ConfigError("invalid number for '" + std::string(key) + "': '" + t + "'");
    return v;
}

inline std::uint64_t parse_uint(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("invalid non-negative integer for '" + std::string(key) + "': '" + t + "'");
    return v;
}

}  // namespace detail

/// "a,b,c" or an inclusive range "start:step:stop".
inline std::vector<double> parse_list(std::string_view key, std::string_view text) {
    const std::string t = detail::trim(text);
    if (t.empty()) throw ConfigError("empty list for '" + std::string(key) + "'");
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(detail::parse_double(key, item));
        if (parts.size() != 3 || parts[1] == 0.0)
            throw ConfigError("range for '" + std::string(key) + "' must be start:step:stop with step != 0");
        const double n = std::floor((parts[2] - parts[0]) / parts[1] + 1e-9);
        if (n < 0.0 || n > 1e6) throw ConfigError("range for '" + std::string(key) + "' is empty or too long");
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
            // round to 12 significant digits so 0.1 + 3*0.05 prints as 0.25
            const double v = parts[0] + parts[1] * static_cast<double>(i);
            out.push_back(detail::parse_double(key, format_number(std::round(v * 1e12) / 1e12)));
        }
        return out;
    }
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(detail::parse_double(key, item));
    return out;
}

/// Flat `key = value` lines; blank lines and lines starting with '#' skipped.
inline Settings parse_settings_text(std::string_view text) {
    Settings out;
    std::stringstream ss{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(ss, line)) {
        ++no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(no) + ": expected key = value");
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(no) + ": empty key");
        out[key] = detail::trim(std::string_view(t).substr(eq + 1));
    }
    return out;
}

inline Settings load_settings_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_settings_text(ss.str());
}

/// Typed read access with the key name in every diagnostic.
class SettingsView {
public:
    explicit SettingsView(const Settings& s) : s_(s) {}

    [[nodiscard]] const std::string& str(const std::string& key) const {
        auto it = s_.find(key);
        if (it == s_.end()) throw ConfigError("missing setting '" + key + "'");
        return it->second;
    }
    [[nodiscard]] double num(const std::string& key) const { return detail::parse_double(key, str(key)); }
    [[nodiscard]] std::size_t count(const std::string& key) const {
        return static_cast<std::size_t>(detail::parse_uint(key, str(key)));
    }
    [[nodiscard]] std::vector<double> list(const std::string& key) const { return parse_list(key, str(key)); }

    [[nodiscard]] DistributionKind distribution(const std::string& key) const {
        auto k = parse_distribution(str(key));
        if (!k) throw ConfigError("unknown distribution for '" + key + "': '" + str(key) + "'");
        return *k;
    }

    template <class E>
    E choice(const std::string& key, std::initializer_list<std::pair<std::string_view, E>> options) const {
        for (const auto& [name, value] : options)
            if (name == str(key)) return value;
        throw ConfigError("invalid value for '" + key + "': '" + str(key) + "'");
    }

private:
    const Settings& s_;
};

// ----------------------------------------------------------------- defaults

namespace detail {

inline Settings link_defaults() {
    return {
        {"trials", "20"},         {"threads", "0"},
        {"nx", "20"},             {"ny", "20"},
        {"nt", "20"},             {"s_p", "10"},
        {"t_p", "10"},            {"correlation", "block"},
        {"jitter_sigma", "0.02"}, {"vgs_lo", "5"},
        {"vgs_hi", "10"},         {"vds_lo", "4.5"},
        {"vds_hi", "10"},         {"tau", "0.05"},
        {"fallback", "min_violation"},
        {"channel", "faded"},     {"synthesis", "spectral"},
        {"n_fft", "8192"},        {"rician_k", "10"},
        {"doppler_frac", "0.02"},
    };
}

}  // namespace detail

/// Every key an experiment accepts, with its built-in value.
inline Settings default_settings(std::string_view experiment) {
    if (experiment == "rmse-sweep") {
        return {{"phi_list", "0.1:0.1:1.0"}, {"vgs_lo", "1"},       {"vgs_hi", "5"},
                {"vds_lo", "4.5"},           {"vds_hi", "10"},      {"vds_start", "4.5"},
                {"vds_step", "0.1"},         {"vds_count", "55"},   {"tau", "0.05"},
                {"fallback", "min_violation"}};
    }
    if (experiment == "estimate-accuracy") {
        auto s = detail::link_defaults();
        s["phi"] = "0.2";
        s["snr_db"] = "20";
        s["bandwidth_hz"] = "200000";
        s["phi_list"] = "0.1,0.2,0.4,0.6,0.8,1.0";
        s["snr_list"] = "-40,-30,-20,-10,0,10,20";
        s["bw_list"] = "50000,100000,200000,500000";
        s["integration_points"] = "1024";
        return s;
    }
    if (experiment == "phi-opt") {
        auto s = detail::link_defaults();
        s["phi_list"] = "0.1:0.05:1.0";
        s["snr_db"] = "-20";
        s["bandwidth_hz"] = "410000";
        s["kind_x1"] = "uniform";
        s["kind_x2"] = "uniform";
        return s;
    }
    if (experiment == "snr-bw") {
        auto s = detail::link_defaults();
        s["phi"] = "0.41";
        s["snr_list"] = "-60:10:20";
        s["bw_list"] = "50000,200000,500000";
        s["kind_x1"] = "uniform";
        s["kind_x2"] = "uniform";
        return s;
    }
    if (experiment == "power") {
        return {{"phi_list", "1,0.5,0.25,0.125"}, {"vgs_lo", "1"},          {"vgs_hi", "5"},
                {"comparators", "4"},             {"opamp_uW", "8"},        {"comparator_nW", "12.7"}};
    }
    throw ConfigError("unknown experiment '" + std::string(experiment) + "'");
}

/// Defaults overlaid with `overrides`; unknown keys are rejected.
inline Settings resolve_settings(std::string_view experiment, const Settings& overrides) {
    Settings s = default_settings(experiment);
    for (const auto& [k, v] : overrides) {
        auto it = s.find(k);
        if (it == s.end()) throw ConfigError("unknown key '" + k + "' for experiment '" + std::string(experiment) + "'");
        it->second = v;
    }
    return s;
}

/// Manifest text: experiment, seed, version, then every resolved setting.
/// Loading it back as a config file reproduces the run.
inline std::string manifest_text(std::string_view experiment, std::uint64_t seed, const Settings& resolved) {
    std::string out;
    out += "experiment = " + std::string(experiment) + "\n";
    out += "seed = " + std::to_string(seed) + "\n";
    out += "version = " + std::string(version) + "\n";
    for (const auto& [k, v] : resolved) out += k + " = " + v + "\n";
    return out;
}

// -------------------------------------------------------------- link setup

inline LinkSetup link_setup_from(const SettingsView& v) {
    LinkSetup s;
    s.field.nx = v.count("nx");
    s.field.ny = v.count("ny");
    s.field.nt = v.count("nt");
    s.field.s_p = v.count("s_p");
    s.field.t_p = v.count("t_p");
    s.field.correlation_mode = v.choice<FieldConfig::Correlation>(
        "correlation", {{"block", FieldConfig::Correlation::block}, {"iid", FieldConfig::Correlation::iid}});
    s.field.jitter_sigma = v.num("jitter_sigma");
    s.ajscc.vgs_lo = v.num("vgs_lo");
    s.ajscc.vgs_hi = v.num("vgs_hi");
    s.ajscc.vds_lo = v.num("vds_lo");
    s.ajscc.vds_hi = v.num("vds_hi");
    s.decoder.tau = v.num("tau");
    s.decoder.fallback = v.choice<DecoderOptions::Fallback>(
        "fallback",
        {{"rank0", DecoderOptions::Fallback::rank0}, {"min_violation", DecoderOptions::Fallback::min_violation}});
    s.channel.mode =
        v.choice<ChannelConfig::Mode>("channel", {{"ideal", ChannelConfig::Mode::ideal}, {"faded", ChannelConfig::Mode::faded}});
    s.channel.synthesis = v.choice<ChannelConfig::Synthesis>(
        "synthesis",
        {{"spectral", ChannelConfig::Synthesis::spectral}, {"time_domain", ChannelConfig::Synthesis::time_domain}});
    s.channel.n_fft = v.count("n_fft");
    s.channel.rician_k = v.num("rician_k");
    s.channel.doppler_frac = v.num("doppler_frac");
    return s;
}

// ------------------------------------------------------------- experiments

struct RmseRow {
    double phi;
    double rmse_vgs_before, rmse_vds_before, rmse_vgs_after, rmse_vds_after;
};

/// Noiseless codec sweep: for every level of the grid, a V_ds staircase is
/// encoded and decoded pairwise along the curve, with and without the range
/// check. RMSE is pooled over all levels and V_ds values.
inline std::vector<RmseRow> rmse_sweep(std::span<const double> phis, const AjsccConfig& base, const MosfetParams& p,
                                       double vds_start, double vds_step, std::size_t vds_count,
                                       const DecoderOptions& opt) {
    detail::require<ConfigError>(vds_count >= 2, "vds_count must be >= 2");
    std::vector<double> vds(vds_count);
    for (std::size_t i = 0; i < vds_count; ++i) vds[i] = vds_start + vds_step * static_cast<double>(i);

    std::vector<RmseRow> rows;
    for (double phi : phis) {
        AjsccConfig cfg = base;
        cfg.phi = phi;
        const auto grid = build_grid(cfg, p);
        DecoderOptions before = opt;
        before.range_check = false;
        DecoderOptions after = opt;
        after.range_check = true;
        double sg_b = 0, sd_b = 0, sg_a = 0, sd_a = 0;
        std::size_t n = 0;
        std::vector<double> ids(vds_count);
        for (double g : grid) {
            for (std::size_t i = 0; i < vds_count; ++i) ids[i] = drain_current(p, g, vds[i]);
            const auto db = decode_series(ids, grid, p, cfg.vds_lo, cfg.vds_hi, before);
            const auto da = decode_series(ids, grid, p, cfg.vds_lo, cfg.vds_hi, after);
            for (std::size_t i = 0; i < vds_count; ++i) {
                sg_b += (db[i].vgs_hat - g) * (db[i].vgs_hat - g);
                sd_b += (db[i].vds_hat - vds[i]) * (db[i].vds_hat - vds[i]);
                sg_a += (da[i].vgs_hat - g) * (da[i].vgs_hat - g);
                sd_a += (da[i].vds_hat - vds[i]) * (da[i].vds_hat - vds[i]);
                ++n;
            }
        }
        const auto m = static_cast<double>(n);
        rows.push_back({phi, std::sqrt(sg_b / m), std::sqrt(sd_b / m), std::sqrt(sg_a / m), std::sqrt(sd_a / m)});
    }
    return rows;
}

struct AccuracyPoint {
    double phi, snr_db, bandwidth_hz;
    auto operator<=>(const AccuracyPoint&) const = default;
};

struct AccuracyTrial {
    DistributionKind truth;
    EstimationResult x1;
    EstimationResult x2;
};

/// Source identification at one operating point: `trials` links per kind,
/// both signals drawn from that kind, each decoded signal classified among
/// the six candidates. Trial seeds depend only on (seed, kind, trial), so
/// every operating point sees the same fields.
inline std::vector<AccuracyTrial> accuracy_trials(LinkSetup setup, const AccuracyPoint& pt, std::size_t trials,
                                                  const KdeConfig& kde, std::uint64_t seed, unsigned threads = 0) {
    detail::require<ConfigError>(trials >= 1, "trials must be >= 1");
    setup.ajscc.phi = pt.phi;
    setup.channel.snr_db = pt.snr_db;
    setup.channel.bandwidth_hz = pt.bandwidth_hz;
    setup.validate();
    kde.validate();
    const double lo = setup.field.scale_lo, hi = setup.field.scale_hi;
    const auto candidates = standard_candidates(lo, hi);
    const std::size_t nk = all_distribution_kinds.size();
    return parallel_map(nk * trials, threads, [&](std::size_t w) {
        const std::size_t ki = w / trials, t = w % trials;
        LinkSetup s = setup;
        s.kind_x1 = s.kind_x2 = all_distribution_kinds[ki];
        const auto r = simulate_link(s, derive_seed(seed, "estimate-accuracy", {ki, t}));
        return AccuracyTrial{all_distribution_kinds[ki], estimate_source(r.x1_hat, candidates, kde, lo, hi),
                             estimate_source(r.x2_hat, candidates, kde, lo, hi)};
    });
}

/// accuracy[signal][kind] from a batch of trials; signal 0 = x1, 1 = x2.
inline std::array<std::map<DistributionKind, AccuracyEntry>, 2> accuracy_tables(std::span<const AccuracyTrial> trials) {
    std::vector<std::pair<DistributionKind, DistributionKind>> a1, a2;
    for (const auto& t : trials) {
        a1.emplace_back(t.truth, t.x1.selected);
        a2.emplace_back(t.truth, t.x2.selected);
    }
    return {classification_accuracy(a1), classification_accuracy(a2)};
}

namespace detail {

inline std::vector<Table> run_rmse_sweep(const SettingsView& v) {
    AjsccConfig base{0.5, v.num("vgs_lo"), v.num("vgs_hi"), v.num("vds_lo"), v.num("vds_hi")};
    DecoderOptions opt;
    opt.tau = v.num("tau");
    opt.fallback = v.choice<DecoderOptions::Fallback>(
        "fallback",
        {{"rank0", DecoderOptions::Fallback::rank0}, {"min_violation", DecoderOptions::Fallback::min_violation}});
    const auto rows = rmse_sweep(v.list("phi_list"), base, MosfetParams{}, v.num("vds_start"), v.num("vds_step"),
                                 v.count("vds_count"), opt);
    Table t{"rmse_sweep.csv", {"phi", "rmse_vgs_before", "rmse_vds_before", "rmse_vgs_after", "rmse_vds_after"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({format_number(r.phi), format_number(r.rmse_vgs_before), format_number(r.rmse_vds_before),
                          format_number(r.rmse_vgs_after), format_number(r.rmse_vds_after)});
    return {t};
}

inline std::vector<Table> run_estimate_accuracy(const SettingsView& v, std::uint64_t seed) {
    const std::size_t trials = v.count("trials");
    require<ConfigError>(trials >= 1, "trials must be >= 1");
    const auto threads = static_cast<unsigned>(v.count("threads"));
    const LinkSetup setup = link_setup_from(v);
    KdeConfig kde;
    kde.integration_points = v.count("integration_points");
    const AccuracyPoint fixed{v.num("phi"), v.num("snr_db"), v.num("bandwidth_hz")};

    std::map<AccuracyPoint, std::vector<AccuracyTrial>> cache;
    auto at = [&](const AccuracyPoint& pt) -> const std::vector<AccuracyTrial>& {
        auto it = cache.find(pt);
        if (it == cache.end()) it = cache.emplace(pt, accuracy_trials(setup, pt, trials, kde, seed, threads)).first;
        return it->second;
    };

    Table acc{"accuracy.csv",
              {"sweep", "phi", "snr_db", "bandwidth_hz", "signal", "distribution", "accuracy", "trials"},
              {}};
    auto emit = [&](std::string_view sweep, const AccuracyPoint& pt) {
        const auto tables = accuracy_tables(at(pt));
        for (std::size_t sig = 0; sig < 2; ++sig)
            for (auto k : all_distribution_kinds) {
                const auto& e = tables[sig].at(k);
                acc.rows.push_back({std::string(sweep), format_number(pt.phi), format_number(pt.snr_db),
                                    format_number(pt.bandwidth_hz), sig == 0 ? "x1" : "x2", std::string(to_string(k)),
                                    format_number(e.accuracy()), format_number(e.total)});
            }
    };
    emit("fixed", fixed);
    for (double phi : v.list("phi_list")) emit("phi", {phi, fixed.snr_db, fixed.bandwidth_hz});
    for (double snr : v.list("snr_list")) emit("snr_db", {fixed.phi, snr, fixed.bandwidth_hz});
    for (double bw : v.list("bw_list")) emit("bandwidth_hz", {fixed.phi, fixed.snr_db, bw});

    Table kld{"kld_scores.csv",
              {"signal", "distribution", "trial", "candidate", "min_kld", "best_h", "best_kernel", "selected"},
              {}};
    const auto& ft = at(fixed);
    for (std::size_t i = 0; i < ft.size(); ++i) {
        const std::size_t trial = i % trials;
        for (std::size_t sig = 0; sig < 2; ++sig) {
            const auto& res = sig == 0 ? ft[i].x1 : ft[i].x2;
            for (const auto& sc : res.scores)
                kld.rows.push_back({sig == 0 ? "x1" : "x2", std::string(to_string(ft[i].truth)), format_number(trial),
                                    std::string(to_string(sc.kind)), format_number(sc.min_kld),
                                    format_number(sc.best_h), std::string(to_string(sc.best_kernel)),
                                    sc.kind == res.selected ? "1" : "0"});
        }
    }
    return {acc, kld};
}

inline std::vector<Table> run_phi_opt(const SettingsView& v, std::uint64_t seed) {
    LinkSetup setup = link_setup_from(v);
    setup.kind_x1 = v.distribution("kind_x1");
    setup.kind_x2 = v.distribution("kind_x2");
    setup.channel.snr_db = v.num("snr_db");
    setup.channel.bandwidth_hz = v.num("bandwidth_hz");
    const auto sweep = sweep_phi(setup, v.list("phi_list"), v.count("trials"), derive_seed(seed, "phi-opt"),
                                 static_cast<unsigned>(v.count("threads")));
    Table t{"phi_opt.csv", {"phi", "mse_gs", "mse_ds", "mse_sum"}, {}};
    for (const auto& p : sweep.points)
        t.rows.push_back({format_number(p.phi), format_number(p.report.mse_gs), format_number(p.report.mse_ds),
                          format_number(p.report.mse_sum)});
    return {t};
}

inline std::vector<Table> run_snr_bw(const SettingsView& v, std::uint64_t seed) {
    LinkSetup setup = link_setup_from(v);
    setup.kind_x1 = v.distribution("kind_x1");
    setup.kind_x2 = v.distribution("kind_x2");
    setup.ajscc.phi = v.num("phi");
    const auto pts = sweep_snr_bw(setup, v.list("snr_list"), v.list("bw_list"), v.count("trials"),
                                  derive_seed(seed, "snr-bw"), static_cast<unsigned>(v.count("threads")));
    Table t{"snr_bw.csv", {"snr_db", "bandwidth_hz", "mse_sum"}, {}};
    for (const auto& p : pts)
        t.rows.push_back({format_number(p.snr_db), format_number(p.bandwidth_hz), format_number(p.report.mse_sum)});
    return {t};
}

inline std::vector<Table> run_power(const SettingsView& v) {
    const PowerModel model{v.num("opamp_uW"), v.num("comparator_nW")};
    const auto comparators = static_cast<int>(v.count("comparators"));
    Table t{"power.csv", {"phi", "levels", "stages", "power_uW"}, {}};
    for (double phi : v.list("phi_list")) {
        const PhiSetting s(phi);
        const auto grid = build_grid({phi, v.num("vgs_lo"), v.num("vgs_hi"), 4.5, 10.0});
        t.rows.push_back({format_number(phi), format_number(grid.size()), format_number(s.stages()),
                          format_number(power_estimate(s, model, comparators))});
    }
    return {t};
}

}  // namespace detail

/// Runs an experiment in memory and returns its tables.
inline std::vector<Table> run_experiment(std::string_view name, std::uint64_t seed, const Settings& resolved) {
    const SettingsView v(resolved);
    if (name == "rmse-sweep") return detail::run_rmse_sweep(v);
    if (name == "estimate-accuracy") return detail::run_estimate_accuracy(v, seed);
    if (name == "phi-opt") return detail::run_phi_opt(v, seed);
    if (name == "snr-bw") return detail::run_snr_bw(v, seed);
    if (name == "power") return detail::run_power(v);
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

/// Resolves settings, runs, and writes each table as CSV with a sibling
/// `<stem>.manifest`. Returns the written paths.
inline std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec) {
    const Settings resolved = resolve_settings(spec.name, spec.overrides);
    const auto tables = run_experiment(spec.name, spec.seed, resolved);
    const std::string manifest = manifest_text(spec.name, spec.seed, resolved);

    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) throw Error("cannot create output directory " + spec.output_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        out << text;
        out.close();
        if (!out) throw Error("cannot write " + path.string());
        written.push_back(path);
    };
    for (const auto& t : tables) {
        const auto csv = spec.output_dir / t.file_name;
        write(csv, t.to_csv());
        write(std::filesystem::path(csv).replace_extension(".manifest"), manifest);
    }
    return written;
}

}  // namespace ajscc
