#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qweak/errors.hpp"
#include "qweak/sweep.hpp"
#include "qweak/verify.hpp"

namespace {

using namespace qweak;
using namespace qweak::cli;

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kIo = 3 };

struct SweepArgs {
    std::string preset;
    std::vector<std::string> sets;
    std::string config;
    std::string axis;
    std::string range;
    std::string out;
    std::string format = "csv";
    double tol = 1e-8;
};

void add_common(CLI::App* sub, SweepArgs& a, bool sweep) {
    sub->add_option("--preset", a.preset, "named figure preset (fig1, fig2, fig3ab, ..., fig5ef_text)");
    sub->add_option("--set", a.sets, "parameter override key=value (repeatable)");
    sub->add_option("--config", a.config, "key=value parameter file, applied before --set");
    sub->add_option("--out", a.out, "output path (stdout when omitted)");
    sub->add_option("--format", a.format, "csv or json");
    if (sweep) {
        sub->add_option("--axis", a.axis, "sweep axis: q, g, z_modulus or n");
        sub->add_option("--range", a.range, "axis values start:stop:count");
        sub->add_option("--tol", a.tol, "oracle agreement reported above this");
    }
}

SweepSpec build_spec(Command command, const SweepArgs& a) {
    SweepSpec spec;
    spec.command = command;
    if (!a.preset.empty()) spec.preset = a.preset;
    if (!a.config.empty()) spec.config_file = read_config_file(a.config);
    for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + s + "'");
        spec.overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (!a.axis.empty()) spec.axis = parse_axis(a.axis);
    if (!a.range.empty()) spec.range = Range::parse(a.range);
    spec.tolerance = a.tol;
    return spec;
}

int run_sweep_command(Command command, const SweepArgs& a) {
    const SweepSpec spec = build_spec(command, a);
    const OutputFormat format = parse_format(a.format);
    const auto policy = fock::DimPolicy::from_environment();
    const SweepResult result = run_sweep(resolve(spec), policy);
    write_result(result, format, a.out);
    if (result.flagged_points > 0) {
        std::cerr << "warning: " << result.flagged_points
                  << " sweep points flagged and left empty (see flagged_* metadata)\n";
    }
    if (result.max_oracle_delta > spec.tolerance) {
        std::cerr << "warning: closed form and Fock oracle differ by " << format_real(result.max_oracle_delta)
                  << " (> " << format_real(spec.tolerance) << ")\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-deformed post-selected weak measurement with q-coherent pointers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    struct Sub {
        const char* name;
        const char* help;
        Command command;
    };
    const std::vector<Sub> sweeps{
        {"weak-value", "weak values against q, with the eigenvalue baseline", Command::WeakValue},
        {"photon-dist", "photon-number distribution P(n)", Command::PhotonDist},
        {"mandel", "q-Mandel parameter", Command::Mandel},
        {"g2", "second-order correlation g2(0)", Command::G2},
        {"quadrature", "quadrature variances, commutator and squeezing", Command::Quadrature},
    };
    std::vector<SweepArgs> sweep_args(sweeps.size());
    std::vector<CLI::App*> sweep_apps;
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        auto* sub = app.add_subcommand(sweeps[i].name, sweeps[i].help);
        add_common(sub, sweep_args[i], true);
        sweep_apps.push_back(sub);
    }

    VerifyOptions vopts;
    std::string verify_out;
    std::string forms = "corrected";
    auto* verify = app.add_subcommand("verify", "closed forms against the truncated-Fock oracle on random configs");
    verify->add_option("--tol", vopts.tolerance, "agreement tolerance");
    verify->add_option("--seed", vopts.seed, "random seed");
    verify->add_option("--count", vopts.count, "number of configurations");
    verify->add_option("--out", verify_out, "JSON report path (stdout when omitted)");
    verify->add_option("--forms", forms, "corrected, or printed to check that the harness catches a bad transcription");

    SweepArgs dump_args;
    auto* dump = app.add_subcommand("dump-operators", "matrix entries of the ladder, number and quadrature operators");
    add_common(dump, dump_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        for (std::size_t i = 0; i < sweeps.size(); ++i) {
            if (sweep_apps[i]->parsed()) return run_sweep_command(sweeps[i].command, sweep_args[i]);
        }
        if (dump->parsed()) {
            const auto spec = build_spec(Command::Mandel, dump_args);
            write_result(dump_operators(spec), parse_format(dump_args.format), dump_args.out);
            return kOk;
        }
        if (verify->parsed()) {
            if (forms == "printed") vopts.forms = FormVariant::AsPrinted;
            else if (forms != "corrected") throw ConfigError("--forms expects corrected or printed");
            const auto report = run_verify(vopts, fock::DimPolicy::from_environment());
            const std::string json = report.to_json();
            if (verify_out.empty()) {
                std::cout << json;
                std::cout.flush();
                if (!std::cout) throw IoError("failed writing to stdout");
            } else {
                std::FILE* f = std::fopen(verify_out.c_str(), "wb");
                if (!f) throw IoError("cannot open '" + verify_out + "' for writing");
                const bool ok = std::fwrite(json.data(), 1, json.size(), f) == json.size();
                if (std::fclose(f) != 0 || !ok) throw IoError("failed writing '" + verify_out + "'");
            }
            std::cerr << "verify: " << report.configs << " configs, " << report.checks << " checks, "
                      << (report.passed() ? "PASS" : "FAIL") << "\n";
            return report.passed() ? kOk : kVerifyFailed;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}
