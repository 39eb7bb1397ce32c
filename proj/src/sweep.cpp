#include "qweak/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qweak/errors.hpp"
#include "qweak/photonstats.hpp"

namespace qweak::cli {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t begin = 0;
    while (true) {
        const auto end = s.find(sep, begin);
        parts.push_back(trim(s.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin)));
        if (end == std::string_view::npos) break;
        begin = end + 1;
    }
    return parts;
}

const std::set<std::string>& phase_keys() {
    static const std::set<std::string> keys{"z_phase", "alpha_phase", "beta_phase"};
    return keys;
}

const std::set<std::string>& real_keys() {
    static const std::set<std::string> keys{"q", "g", "z_modulus", "alpha_modulus", "beta_modulus"};
    return keys;
}

Range default_range(Axis axis) {
    switch (axis) {
        case Axis::Q: return {0.05, 1.0, 20};
        case Axis::G: return {0.0, 1.0, 21};
        case Axis::ZModulus: return {0.05, 2.0, 40};
        case Axis::N: return {0.0, 15.0, 16};
    }
    return {};
}

Axis default_axis(Command c) {
    switch (c) {
        case Command::WeakValue: return Axis::Q;
        case Command::PhotonDist: return Axis::N;
        default: return Axis::ZModulus;
    }
}

bool axis_fits(Command c, Axis a) { return (c == Command::PhotonDist) == (a == Axis::N); }

void check_known(const ParamMap& params, std::string_view origin) {
    const auto& known = default_parameters();
    for (const auto& [key, value] : params) {
        if (!known.count(key)) throw ConfigError("unknown parameter '" + key + "' in " + std::string(origin));
    }
}

void apply(ParamMap& into, const ParamMap& from) {
    for (const auto& [key, value] : from) into[key] = value;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
    std::size_t v = 0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" + std::string(text) + "'");
    return v;
}

void check_axis_value(Axis axis, double v) {
    switch (axis) {
        case Axis::Q:
            if (!(v > 0.0 && v <= 1.0)) throw ConfigError("q values must lie in (0, 1], got " + format_real(v));
            break;
        case Axis::G:
            if (!(v >= 0.0)) throw ConfigError("g values must be >= 0, got " + format_real(v));
            break;
        case Axis::ZModulus:
            if (!(v >= 0.0)) throw ConfigError("z_modulus values must be >= 0, got " + format_real(v));
            break;
        case Axis::N:
            if (!(v >= 0.0) || v != std::floor(v))
                throw ConfigError("photon numbers must be nonnegative integers, got " + format_real(v));
            break;
    }
}

MeasurementConfig base_config(const ParamMap& p) {
    MeasurementConfig c;
    c.q = DeformationParameter(parse_real("q", p.at("q")));
    c.g = parse_real("g", p.at("g"));
    c.z = CoherentLabel(parse_real("z_modulus", p.at("z_modulus")), parse_phase(p.at("z_phase")));
    c.alpha = CoherentLabel(parse_real("alpha_modulus", p.at("alpha_modulus")), parse_phase(p.at("alpha_phase")));
    c.beta = CoherentLabel(parse_real("beta_modulus", p.at("beta_modulus")), parse_phase(p.at("beta_phase")));
    return c;
}

void set_axis(MeasurementConfig& c, Axis axis, double v) {
    switch (axis) {
        case Axis::Q: c.q = DeformationParameter(v); break;
        case Axis::G: c.g = v; break;
        case Axis::ZModulus: c.z = CoherentLabel(v, c.z.phase()); break;
        case Axis::N: break;
    }
}

// Outcome of evaluating one observable at one sweep point.
struct PointEval {
    std::string status = "ok";
    std::vector<Cell> cells;
    double oracle_delta = 0.0;
};

template <class F>
PointEval guarded(std::size_t width, F&& body) {
    PointEval out;
    try {
        body(out);
        return out;
    } catch (const DomainError&) {
        out.status = "out_of_domain";
    } catch (const ZeroMeanPhoton&) {
        out.status = "zero_mean_photon";
    } catch (const DimensionOverflow&) {
        out.status = "dimension_overflow";
    } catch (const NonConvergence&) {
        out.status = "non_convergence";
    } catch (const NonPositiveNorm&) {
        out.status = "non_positive_norm";
    }
    out.cells.assign(width, Cell::empty());
    out.oracle_delta = 0.0;
    return out;
}

std::vector<std::string> quantity_columns(Command c) {
    switch (c) {
        case Command::WeakValue: return {"weak_value_re", "weak_value_im", "weak_value_abs", "anomalous"};
        case Command::PhotonDist: return {"probability"};
        case Command::Mandel: return {"mandel_q", "mean_photon"};
        case Command::G2: return {"g2_zero", "mean_photon"};
        case Command::Quadrature:
            return {"mean_x",          "mean_p",        "var_x",         "var_p",
                    "half_commutator", "commutator_re", "commutator_im", "cross_xp_re",
                    "cross_xp_im",     "uncertainty_product", "uncertainty_bound", "squeezed_x",
                    "squeezed_p"};
    }
    return {};
}

PointEval evaluate_statistics(Command command, const MeasurementConfig& config, const fock::DimPolicy& policy) {
    const std::size_t width = quantity_columns(command).size();
    return guarded(width, [&](PointEval& out) {
        const WeakValue aw = weak_value(config);
        const DualExpectations d = dual_expectations(config, aw, policy);
        const auto& c = d.closed;
        const auto& o = d.oracle;
        switch (command) {
            case Command::Mandel: {
                const double q = mandel_from(c);
                out.cells = {Cell::of(q), Cell::of(c.number)};
                out.oracle_delta = std::max(oracle_delta(q, mandel_from(o)), oracle_delta(c.number, o.number));
                break;
            }
            case Command::G2: {
                const double g2 = g2_from(c);
                out.cells = {Cell::of(g2), Cell::of(c.number)};
                out.oracle_delta = std::max(oracle_delta(g2, g2_from(o)), oracle_delta(c.number, o.number));
                break;
            }
            case Command::Quadrature: {
                const QuadratureMoments m = moments_from(c);
                const QuadratureMoments om = moments_from(o);
                out.cells = {Cell::of(m.mean_x),
                             Cell::of(m.mean_p),
                             Cell::of(m.var_x),
                             Cell::of(m.var_p),
                             Cell::of(0.5 * std::abs(m.commutator_expect)),
                             Cell::of(m.commutator_expect.real()),
                             Cell::of(m.commutator_expect.imag()),
                             Cell::of(m.cross_xp.real()),
                             Cell::of(m.cross_xp.imag()),
                             Cell::of(m.uncertainty_product()),
                             Cell::of(m.uncertainty_bound()),
                             Cell::of(m.squeezed_x),
                             Cell::of(m.squeezed_p)};
                out.oracle_delta = std::max({oracle_delta(m.mean_x, om.mean_x), oracle_delta(m.mean_p, om.mean_p),
                                             oracle_delta(m.var_x, om.var_x), oracle_delta(m.var_p, om.var_p),
                                             oracle_delta(m.cross_xp, om.cross_xp),
                                             oracle_delta(m.commutator_expect, om.commutator_expect)});
                break;
            }
            default: break;
        }
    });
}

PointEval evaluate_weak_value(const MeasurementConfig& config, const fock::DimPolicy& policy) {
    return guarded(4, [&](PointEval& out) {
        const WeakValue w = weak_value(config);
        out.cells = {Cell::of(w.value.real()), Cell::of(w.value.imag()), Cell::of(std::abs(w.value)),
                     Cell::of(w.anomalous)};
        out.oracle_delta =
            oracle_delta(w.value, oracle_weak_value(config.alpha, config.beta, config.q, config.observable, policy));
    });
}

std::string family_label(const ResolvedSweep& s, double v) {
    return s.family == "none" ? std::string("all") : s.family + "=" + format_real(v);
}

}  // namespace

std::string_view to_string(Command c) {
    switch (c) {
        case Command::WeakValue: return "weak-value";
        case Command::PhotonDist: return "photon-dist";
        case Command::Mandel: return "mandel";
        case Command::G2: return "g2";
        case Command::Quadrature: return "quadrature";
    }
    return "";
}

std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::Q: return "q";
        case Axis::G: return "g";
        case Axis::ZModulus: return "z_modulus";
        case Axis::N: return "n";
    }
    return "";
}

Axis parse_axis(std::string_view text) {
    const auto t = lower(trim(text));
    if (t == "q") return Axis::Q;
    if (t == "g") return Axis::G;
    if (t == "z_modulus" || t == "z") return Axis::ZModulus;
    if (t == "n") return Axis::N;
    throw ConfigError("unknown axis '" + std::string(text) + "' (expected q, g, z_modulus or n)");
}

OutputFormat parse_format(std::string_view text) {
    const auto t = lower(trim(text));
    if (t == "csv") return OutputFormat::Csv;
    if (t == "json") return OutputFormat::Json;
    throw ConfigError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

Range Range::parse(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:stop:count, got '" + std::string(text) + "'");
    Range r{parse_real("range start", parts[0]), parse_real("range stop", parts[1]), parse_count("range count", parts[2])};
    if (r.count == 0) throw ConfigError("range count must be >= 1");
    if (r.count > 1 && !(r.start < r.stop)) throw ConfigError("range must be strictly increasing: " + std::string(text));
    if (r.count == 1 && r.start != r.stop)
        throw ConfigError("a single-point range needs start == stop: " + std::string(text));
    return r;
}

std::vector<double> Range::values() const {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = start + step * static_cast<double>(i);
    v.back() = stop;
    return v;
}

std::string Range::to_string() const {
    return format_real(start) + ":" + format_real(stop) + ":" + std::to_string(count);
}

const ParamMap& default_parameters() {
    static const ParamMap defaults{
        {"q", "1"},           {"g", "0"},           {"z_modulus", "1"},     {"z_phase", "0"},
        {"alpha_modulus", "0"}, {"alpha_phase", "0"}, {"beta_modulus", "0"}, {"beta_phase", "0"},
        {"observable", "both"}, {"family", "none"},   {"family_values", ""},  {"dim", "8"},
    };
    return defaults;
}

double parse_real(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    double v = 0.0;
    const char* begin = t.data();
    if (!t.empty() && t.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
    return v;
}

double parse_phase(std::string_view text) {
    const std::string t = lower(trim(text));
    const auto pos = t.find("pi");
    if (pos == std::string::npos) return parse_real("phase", t);

    std::string_view coef = trim(std::string_view(t).substr(0, pos));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double c = 1.0;
    if (coef == "-") c = -1.0;
    else if (!coef.empty() && coef != "+") c = parse_real("phase", coef);

    const std::string_view rest = trim(std::string_view(t).substr(pos + 2));
    double den = 1.0;
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("cannot read phase '" + std::string(text) + "'");
        den = parse_real("phase", rest.substr(1));
        if (den == 0.0) throw ConfigError("phase divides by zero: '" + std::string(text) + "'");
    }
    return c * std::numbers::pi / den;
}

ParamMap parse_config_text(std::string_view text, std::string_view origin) {
    ParamMap out;
    std::size_t line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
        out[key] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

ParamMap read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error while reading config file '" + path + "'");
    return parse_config_text(buf.str(), path);
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = [] {
        const ParamMap fig34{{"alpha_modulus", "2"}, {"alpha_phase", "pi/8"}, {"beta_modulus", "0.5"},
                             {"beta_phase", "7pi/8"}, {"z_phase", "pi/2"},   {"observable", "both"}};
        const ParamMap fig5cd{{"alpha_modulus", "4"}, {"alpha_phase", "pi/3"}, {"beta_modulus", "0.5"},
                              {"beta_phase", "2pi/3"}, {"z_phase", "pi/2"},   {"observable", "both"}};
        auto with = [](ParamMap base, const ParamMap& extra) {
            for (const auto& [k, v] : extra) base[k] = v;
            return base;
        };
        const Range z_axis{0.05, 2.0, 40};
        return std::vector<Preset>{
            {"fig1", Command::WeakValue, "weak value of X2 against the eigenvalue baseline",
             {{"alpha_modulus", "2"}, {"alpha_phase", "pi/8"}, {"beta_modulus", "0.5"}, {"beta_phase", "7pi/8"},
              {"z_modulus", "1"}, {"z_phase", "pi/8"}, {"observable", "x2"}},
             Axis::Q, {0.05, 1.0, 96}},
            {"fig2", Command::PhotonDist, "photon distribution for the X2 weak value",
             {{"g", "0.3"}, {"z_modulus", "1.5"}, {"z_phase", "pi/2"}, {"alpha_modulus", "2"},
              {"alpha_phase", "pi/2"}, {"beta_modulus", "1"}, {"beta_phase", "pi/2"}, {"observable", "x2"},
              {"family", "q"}, {"family_values", "0.2,0.4,0.6,0.8,0.9,1"}},
             Axis::N, {0.0, 15.0, 16}},
            {"fig3ab", Command::Mandel, "Mandel parameter at g=0.6 for several q",
             with(fig34, {{"g", "0.6"}, {"family", "q"}, {"family_values", "0.2,0.5,0.8,1"}}), Axis::ZModulus, z_axis},
            {"fig3cd", Command::Mandel, "Mandel parameter at q=0.8 for several g",
             with(fig34, {{"q", "0.8"}, {"family", "g"}, {"family_values", "0.2,0.4,0.6,0.8,1"}}), Axis::ZModulus,
             z_axis},
            {"fig4ab", Command::G2, "g2(0) at g=0.2 for several q",
             with(fig34, {{"g", "0.2"}, {"family", "q"}, {"family_values", "0.3,0.5,0.8,1"}}), Axis::ZModulus, z_axis},
            {"fig4cd", Command::G2, "g2(0) at q=0.3 for several g",
             with(fig34, {{"q", "0.3"}, {"family", "g"}, {"family_values", "0.2,0.4,0.6,0.8,1"}}), Axis::ZModulus,
             z_axis},
            {"fig5ab", Command::Quadrature, "uncertainty relation with |alpha|=4, |beta|=2",
             with(fig34, {{"alpha_modulus", "4"}, {"beta_modulus", "2"}, {"g", "0.8"}, {"family", "q"},
                          {"family_values", "0.9,0.95,1"}}),
             Axis::ZModulus, z_axis},
            {"fig5cd", Command::Quadrature, "quadrature variances at g=0.8 for several q (caption)",
             with(fig5cd, {{"g", "0.8"}, {"family", "q"}, {"family_values", "0.3,0.5,0.7,0.9"}}), Axis::ZModulus,
             z_axis},
            {"fig5cd_text", Command::Quadrature, "quadrature variances at g=0.9 for several q (prose)",
             with(fig5cd, {{"g", "0.9"}, {"family", "q"}, {"family_values", "0.3,0.5,0.7,0.9"}}), Axis::ZModulus,
             z_axis},
            {"fig5ef", Command::Quadrature, "quadrature variances at q=0.7 for several g (caption)",
             with(fig5cd, {{"q", "0.7"}, {"family", "g"}, {"family_values", "0.2,0.4,0.6,0.8"}}), Axis::ZModulus,
             z_axis},
            {"fig5ef_text", Command::Quadrature, "quadrature variances at q=0.8 for several g (prose)",
             with(fig5cd, {{"q", "0.8"}, {"family", "g"}, {"family_values", "0.2,0.4,0.6,0.8"}}), Axis::ZModulus,
             z_axis},
        };
    }();
    return all;
}

const Preset& find_preset(std::string_view name) {
    static const std::map<std::string, std::string, std::less<>> aliases{
        {"fig3a", "fig3ab"},  {"fig3b", "fig3ab"},       {"fig3c", "fig3cd"},      {"fig3d", "fig3cd"},
        {"fig4a", "fig4ab"},  {"fig4b", "fig4ab"},       {"fig4c", "fig4cd"},      {"fig4d", "fig4cd"},
        {"fig5a", "fig5ab"},  {"fig5b", "fig5ab"},       {"fig5c", "fig5cd"},      {"fig5d", "fig5cd"},
        {"fig5e", "fig5ef"},  {"fig5f", "fig5ef"},       {"fig5_caption", "fig5cd"}, {"fig5_text", "fig5cd_text"},
    };
    std::string key = lower(trim(name));
    if (const auto it = aliases.find(key); it != aliases.end()) key = it->second;
    for (const auto& p : presets()) {
        if (p.name == key) return p;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ResolvedSweep resolve(const SweepSpec& spec) {
    check_known(spec.config_file, "config file");
    check_known(spec.overrides, "--set");
    if (!(spec.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");

    ResolvedSweep r;
    r.command = spec.command;
    r.tolerance = spec.tolerance;
    r.params = default_parameters();
    const Preset* preset = nullptr;
    if (spec.preset) {
        preset = &find_preset(*spec.preset);
        r.preset = preset->name;
        apply(r.params, preset->params);
    }
    apply(r.params, spec.config_file);
    apply(r.params, spec.overrides);

    for (const auto& key : real_keys()) parse_real(key, r.params.at(key));
    for (const auto& key : phase_keys()) parse_phase(r.params.at(key));
    if (!(parse_real("g", r.params.at("g")) >= 0.0)) throw ConfigError("g must be >= 0");
    check_axis_value(Axis::Q, parse_real("q", r.params.at("q")));
    for (const char* key : {"z_modulus", "alpha_modulus", "beta_modulus"}) {
        if (parse_real(key, r.params.at(key)) < 0.0) throw ConfigError(std::string(key) + " must be >= 0");
    }

    const std::string obs = lower(r.params.at("observable"));
    if (obs == "both") r.observables = {Observable::X1, Observable::X2};
    else r.observables = {parse_observable(obs)};

    if (spec.axis) r.axis = *spec.axis;
    else if (preset && axis_fits(spec.command, preset->axis)) r.axis = preset->axis;
    else r.axis = default_axis(spec.command);
    if (!axis_fits(spec.command, r.axis)) {
        throw ConfigError(spec.command == Command::PhotonDist ? "photon-dist sweeps the photon number axis n"
                                                              : "axis n is only valid for photon-dist");
    }
    if (spec.range) r.range = *spec.range;
    else if (preset && preset->axis == r.axis) r.range = preset->range;
    else r.range = default_range(r.axis);
    r.axis_values = r.range.values();
    for (double v : r.axis_values) check_axis_value(r.axis, v);

    r.family = lower(r.params.at("family"));
    if (r.family == "none") {
        r.family_values = {std::numeric_limits<double>::quiet_NaN()};
    } else {
        const Axis fam = parse_axis(r.family);
        if (fam == Axis::N) throw ConfigError("family cannot be n");
        if (fam == r.axis) throw ConfigError("family and axis must differ");
        r.family = std::string(to_string(fam));
        const std::string& list = r.params.at("family_values");
        if (trim(list).empty()) throw ConfigError("family '" + r.family + "' needs family_values");
        for (auto part : split(list, ',')) {
            const double v = parse_real("family_values", part);
            check_axis_value(fam, v);
            r.family_values.push_back(v);
        }
    }
    return r;
}

MeasurementConfig point_config(const ResolvedSweep& sweep, double family_value, double axis_value) {
    MeasurementConfig c = base_config(sweep.params);
    if (sweep.family != "none") set_axis(c, parse_axis(sweep.family), family_value);
    set_axis(c, sweep.axis, axis_value);
    return c;
}

SweepResult run_sweep(const ResolvedSweep& s, const fock::DimPolicy& policy) {
    SweepResult result;
    const bool has_family = s.family != "none";
    const Axis family_axis = has_family ? parse_axis(s.family) : Axis::N;
    const auto quantities = quantity_columns(s.command);

    if (has_family) result.columns.push_back(s.family);
    result.columns.emplace_back(to_string(s.axis));
    if (s.command == Command::WeakValue) result.columns.emplace_back("eigenvalue");
    for (Observable obs : s.observables) {
        const std::string suffix = "_" + std::string(to_string(obs));
        result.columns.push_back("status" + suffix);
        for (const auto& q : quantities) result.columns.push_back(q + suffix);
        result.columns.push_back("oracle_delta" + suffix);
    }

    const MeasurementConfig base = base_config(s.params);
    std::vector<std::pair<std::string, std::string>> flagged;

    for (double fv : s.family_values) {
        MeasurementConfig fam_config = base;
        if (has_family) set_axis(fam_config, family_axis, fv);

        // The photon distribution is computed once per family value and read per n.
        std::vector<PointEval> dist_rows;
        std::vector<std::vector<double>> dist_probs, dist_oracle;
        if (s.command == Command::PhotonDist) {
            const auto max_n = static_cast<std::size_t>(s.axis_values.back());
            for (Observable obs : s.observables) {
                MeasurementConfig c = fam_config;
                c.observable = obs;
                std::vector<double> probs, oracle;
                dist_rows.push_back(guarded(1, [&](PointEval&) {
                    const WeakValue aw = weak_value(c);
                    const auto pointer = pointer_state(c, aw, policy);
                    probs = photon_distribution(c, aw, std::max(max_n + 1, pointer.dim())).probs;
                    oracle = oracle_distribution(pointer);
                    oracle.resize(probs.size(), 0.0);
                }));
                dist_probs.push_back(std::move(probs));
                dist_oracle.push_back(std::move(oracle));
            }
        }

        std::vector<std::size_t> bad(s.observables.size(), 0);
        std::vector<std::set<std::string>> reasons(s.observables.size());
        for (double av : s.axis_values) {
            MeasurementConfig point = fam_config;
            set_axis(point, s.axis, av);

            std::vector<Cell> row;
            if (has_family) row.push_back(Cell::of(fv));
            row.push_back(Cell::of(av));
            if (s.command == Command::WeakValue) {
                try {
                    row.push_back(Cell::of(eigenvalue_scale(point.z, point.q)));
                } catch (const DomainError&) {
                    row.push_back(Cell::empty());
                }
            }
            for (std::size_t k = 0; k < s.observables.size(); ++k) {
                point.observable = s.observables[k];
                PointEval e;
                if (s.command == Command::PhotonDist) {
                    e.status = dist_rows[k].status;
                    if (e.status == "ok") {
                        const auto n = static_cast<std::size_t>(av);
                        e.cells = {Cell::of(dist_probs[k][n])};
                        e.oracle_delta = std::abs(dist_probs[k][n] - dist_oracle[k][n]);
                    } else {
                        e.cells = {Cell::empty()};
                    }
                } else if (s.command == Command::WeakValue) {
                    e = evaluate_weak_value(point, policy);
                } else {
                    e = evaluate_statistics(s.command, point, policy);
                }
                row.push_back(Cell::of(e.status));
                for (auto& cell : e.cells) row.push_back(std::move(cell));
                if (e.status == "ok") {
                    row.push_back(Cell::of(e.oracle_delta));
                    result.max_oracle_delta = std::max(result.max_oracle_delta, e.oracle_delta);
                } else {
                    row.push_back(Cell::empty());
                    ++bad[k];
                    reasons[k].insert(e.status);
                }
            }
            result.rows.push_back(std::move(row));
        }
        for (std::size_t k = 0; k < s.observables.size(); ++k) {
            if (bad[k] == 0) continue;
            result.flagged_points += bad[k];
            std::string why;
            for (const auto& r : reasons[k]) why += (why.empty() ? "" : "+") + r;
            flagged.emplace_back("flagged_" + std::string(to_string(s.observables[k])) + "[" + family_label(s, fv) + "]",
                                 std::to_string(bad[k]) + " of " + std::to_string(s.axis_values.size()) + " (" + why +
                                     ")");
        }
    }

    auto& md = result.metadata;
    md.emplace_back("tool", std::string(kToolName));
    md.emplace_back("version", std::string(kToolVersion));
    md.emplace_back("command", std::string(to_string(s.command)));
    md.emplace_back("preset", s.preset.empty() ? "none" : s.preset);
    for (const auto& [key, value] : s.params) {
        if (key == "dim") continue;
        std::string shown = value;
        if (key == std::string(to_string(s.axis)) || key == s.family) shown = "swept";
        else if (real_keys().count(key)) shown = format_real(parse_real(key, value));
        else if (phase_keys().count(key)) shown = format_real(parse_phase(value));
        else if (key == "family_values" && s.family == "none") shown = "none";
        md.emplace_back(key, shown);
    }
    md.emplace_back("axis", std::string(to_string(s.axis)));
    md.emplace_back("range", s.range.to_string());
    md.emplace_back("oracle_tolerance", format_real(s.tolerance));
    md.emplace_back("closed_forms", "corrected");
    md.emplace_back("domain_margin", format_real(kDomainMargin));
    md.emplace_back("series_tolerance", format_real(kDefaultSeriesTolerance));
    md.emplace_back("fock_start_dim", std::to_string(policy.start));
    md.emplace_back("fock_max_dim", std::to_string(policy.max_dim));
    md.emplace_back("fock_tail_target", format_real(policy.tail_target));
    md.emplace_back("flagged_points", std::to_string(result.flagged_points));
    for (auto& f : flagged) md.push_back(std::move(f));
    md.emplace_back("max_oracle_delta", format_real(result.max_oracle_delta));
    return result;
}

namespace {
SweepResult run_as(Command c, SweepSpec spec, const fock::DimPolicy& policy) {
    spec.command = c;
    return run_sweep(resolve(spec), policy);
}
}  // namespace

SweepResult run_weak_value_sweep(SweepSpec spec, const fock::DimPolicy& policy) {
    return run_as(Command::WeakValue, std::move(spec), policy);
}
SweepResult run_photon_dist(SweepSpec spec, const fock::DimPolicy& policy) {
    return run_as(Command::PhotonDist, std::move(spec), policy);
}
SweepResult run_mandel_sweep(SweepSpec spec, const fock::DimPolicy& policy) {
    return run_as(Command::Mandel, std::move(spec), policy);
}
SweepResult run_g2_sweep(SweepSpec spec, const fock::DimPolicy& policy) {
    return run_as(Command::G2, std::move(spec), policy);
}
SweepResult run_quadrature_sweep(SweepSpec spec, const fock::DimPolicy& policy) {
    return run_as(Command::Quadrature, std::move(spec), policy);
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    for (const auto& [key, value] : result.metadata) out << "# " << key << ": " << value << '\n';
    for (std::size_t i = 0; i < result.columns.size(); ++i) out << (i ? "," : "") << result.columns[i];
    out << '\n';
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            const Cell& c = row[i];
            if (c.kind == Cell::Kind::Number) out << format_real(c.number);
            else if (c.kind == Cell::Kind::Text) out << c.text;
        }
        out << '\n';
    }
}

void write_json(const SweepResult& result, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : result.metadata) doc["metadata"][key] = value;
    doc["columns"] = result.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const Cell& c : row) {
            if (c.kind == Cell::Kind::Number) {
                if (std::isfinite(c.number)) r.push_back(c.number);
                else r.push_back(format_real(c.number));
            } else if (c.kind == Cell::Kind::Text) {
                r.push_back(c.text);
            } else {
                r.push_back(nullptr);
            }
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void write_result(const SweepResult& result, OutputFormat format, const std::string& path) {
    auto emit = [&](std::ostream& os) {
        if (format == OutputFormat::Csv) write_csv(result, os);
        else write_json(result, os);
    };
    if (path.empty() || path == "-") {
        emit(std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    emit(out);
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

SweepResult dump_operators(const SweepSpec& spec) {
    check_known(spec.config_file, "config file");
    check_known(spec.overrides, "--set");
    ParamMap params = default_parameters();
    if (spec.preset) apply(params, find_preset(*spec.preset).params);
    apply(params, spec.config_file);
    apply(params, spec.overrides);

    const double qv = parse_real("q", params.at("q"));
    check_axis_value(Axis::Q, qv);
    const std::size_t dim = parse_count("dim", params.at("dim"));
    if (dim < 2 || dim > 4096) throw ConfigError("dim must lie in [2, 4096]");
    const DeformationParameter q(qv);

    const auto quad = fock::build_quadratures(q, dim);
    const std::vector<std::pair<std::string, fock::FockOperator>> ops{
        {"a", fock::build_annihilator(q, dim)}, {"a_dagger", fock::build_creation(q, dim)},
        {"number", fock::build_number(q, dim)}, {"q_half_number", fock::build_q_half_number(q, dim)},
        {"x1", quad.x1},                        {"x2", quad.x2},
        {"p", quad.p},
    };

    SweepResult result;
    result.metadata = {{"tool", std::string(kToolName)},
                       {"version", std::string(kToolVersion)},
                       {"command", "dump-operators"},
                       {"q", format_real(qv)},
                       {"dim", std::to_string(dim)}};
    result.columns = {"operator", "row", "col", "value_re", "value_im"};
    for (const auto& [name, op] : ops) {
        const auto& m = op.entries();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                result.rows.push_back({Cell::of(name), Cell::of(static_cast<double>(i)), Cell::of(static_cast<double>(j)),
                                       Cell::of(m(i, j).real()), Cell::of(m(i, j).imag())});
            }
        }
    }
    return result;
}

}  // namespace qweak::cli
