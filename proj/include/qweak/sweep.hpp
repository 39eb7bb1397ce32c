#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qweak/fockspace.hpp"
#include "qweak/weakmeas.hpp"

namespace qweak::cli {

inline constexpr std::string_view kToolName = "qweak";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { WeakValue, PhotonDist, Mandel, G2, Quadrature };
enum class Axis { Q, G, ZModulus, N };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command c);
std::string_view to_string(Axis a);
Axis parse_axis(std::string_view text);
OutputFormat parse_format(std::string_view text);

struct Range {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    // "start:stop:count"; throws ConfigError
    static Range parse(std::string_view text);
    std::vector<double> values() const;
    std::string to_string() const;
};

// Parameter names mapped to their textual values; std::map keeps output order stable.
using ParamMap = std::map<std::string, std::string>;

// Every name accepted by --set and the config file, with its default.
const ParamMap& default_parameters();

// Radians from "0.3", "pi/8", "7pi/8", "-pi/2", "2*pi/3", "pi". Throws ConfigError.
double parse_phase(std::string_view text);
double parse_real(std::string_view key, std::string_view text);

// key=value lines, '#' comments and blank lines ignored.
ParamMap parse_config_text(std::string_view text, std::string_view origin);
ParamMap read_config_file(const std::string& path);  // IoError when unreadable

struct Preset {
    std::string name;
    Command command;
    std::string description;
    ParamMap params;
    Axis axis;
    Range range;
};

const std::vector<Preset>& presets();
// Accepts canonical names and the per-panel aliases (fig3a, fig5_caption, ...).
const Preset& find_preset(std::string_view name);

struct SweepSpec {
    Command command = Command::Mandel;
    std::optional<std::string> preset;
    ParamMap config_file;       // applied after the preset
    ParamMap overrides;         // --set, applied last
    std::optional<Axis> axis;
    std::optional<Range> range;
    double tolerance = 1e-8;    // oracle deltas above this are reported
};

struct ResolvedSweep {
    Command command = Command::Mandel;
    std::string preset;
    ParamMap params;
    Axis axis = Axis::ZModulus;
    Range range;
    std::vector<double> axis_values;
    std::string family;                 // "none", "q", "g" or "z_modulus"
    std::vector<double> family_values;  // one entry (NaN) when family is "none"
    std::vector<Observable> observables;
    double tolerance = 1e-8;
};

ResolvedSweep resolve(const SweepSpec& spec);

// Configuration at one sweep point (observable left at its default).
MeasurementConfig point_config(const ResolvedSweep& sweep, double family_value, double axis_value);

struct Cell {
    enum class Kind { Empty, Number, Text };
    Kind kind = Kind::Empty;
    double number = 0.0;
    std::string text;

    static Cell empty() { return {}; }
    static Cell of(double v) { return {Kind::Number, v, {}}; }
    static Cell of(std::string s) { return {Kind::Text, 0.0, std::move(s)}; }
    static Cell of(const char* s) { return of(std::string(s)); }
    static Cell of(bool b) { return of(std::string(b ? "true" : "false")); }
};

struct SweepResult {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::size_t flagged_points = 0;
    double max_oracle_delta = 0.0;
};

SweepResult run_sweep(const ResolvedSweep& sweep, const fock::DimPolicy& policy);

SweepResult run_weak_value_sweep(SweepSpec spec, const fock::DimPolicy& policy);
SweepResult run_photon_dist(SweepSpec spec, const fock::DimPolicy& policy);
SweepResult run_mandel_sweep(SweepSpec spec, const fock::DimPolicy& policy);
SweepResult run_g2_sweep(SweepSpec spec, const fock::DimPolicy& policy);
SweepResult run_quadrature_sweep(SweepSpec spec, const fock::DimPolicy& policy);

// 17 significant digits, shortest spelling of special values.
std::string format_real(double v);

void write_csv(const SweepResult& result, std::ostream& out);
void write_json(const SweepResult& result, std::ostream& out);
// Writes to `path`, or stdout when empty. IoError on failure.
void write_result(const SweepResult& result, OutputFormat format, const std::string& path);

// Matrix entries of a, a^+, N, q^{N/2}, X1, X2, P as a long table.
// Uses the q and dim parameters (preset, config file and --set applied).
SweepResult dump_operators(const SweepSpec& spec);

}  // namespace qweak::cli
