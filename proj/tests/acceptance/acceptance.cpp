// Acceptance gate: one PASS/FAIL line per criterion, details indented below it.
// Usage: qweak_acceptance [path-to-qweak-cli]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qweak/errors.hpp"
#include "qweak/photonstats.hpp"
#include "qweak/sweep.hpp"
#include "qweak/verify.hpp"

namespace {

using namespace qweak;
using namespace qweak::cli;
namespace fs = std::filesystem;

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

ResolvedSweep preset_sweep(const std::string& name, ParamMap overrides = {}) {
    SweepSpec spec;
    spec.command = find_preset(name).command;
    spec.preset = name;
    spec.overrides = std::move(overrides);
    return resolve(spec);
}

// Runs `body` for every (family, axis, observable) point of a preset whose
// weak value and pointer lie in the convergence domain; returns skipped count.
std::size_t for_each_point(const ResolvedSweep& s,
                           const std::function<void(const MeasurementConfig&, double, double)>& body) {
    std::size_t skipped = 0;
    for (double fv : s.family_values) {
        for (double av : s.axis_values) {
            for (Observable obs : s.observables) {
                MeasurementConfig c = point_config(s, fv, av);
                c.observable = obs;
                try {
                    body(c, fv, av);
                } catch (const DomainError&) {
                    ++skipped;
                }
            }
        }
    }
    return skipped;
}

const fock::DimPolicy kPolicy{};

// 1. closed forms against the truncated-Fock oracle on 200 seeded configs
Outcome oracle_equivalence() {
    VerifyOptions opts;
    opts.tolerance = 1e-8;
    opts.seed = 42;
    opts.count = 200;
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyReport report = run_verify(opts, kPolicy);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::size_t basis = report.max_dim - kPointerPadding;

    Outcome o;
    double worst = 0.0;
    std::string worst_name;
    for (const auto& [k, v] : report.max_deltas) {
        if (v >= worst) {
            worst = v;
            worst_name = k;
        }
    }
    o.pass = report.passed() && report.configs >= 200 && seconds < 60.0 && basis <= 256;
    o.summary = "oracle equivalence: " + std::to_string(report.configs) + " configs, " +
                std::to_string(report.checks) + " checks, max delta " + fmt(worst, 3) + " (" + worst_name +
                ") <= 1e-8, " + fmt(seconds, 3) + " s, truncation dim <= " + std::to_string(basis);
    for (const auto& f : report.failures) o.details.push_back(f);
    return o;
}

// 2. the undeformed limit
Outcome undeformed_limit() {
    Outcome o;
    const DeformationParameter one(1.0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double wv = 0.0;
    for (int i = 0; i < 200; ++i) {
        const CoherentLabel a(3.0 * u(rng), 2 * std::numbers::pi * u(rng));
        const CoherentLabel b(3.0 * u(rng), 2 * std::numbers::pi * u(rng));
        wv = std::max(wv, std::abs(weak_value_x2(a, b, one).value - weak_value_x1(a, b).value));
    }

    double poisson = 0.0, mandel = 0.0, g2 = 0.0;
    for (double zm : {0.1, 0.5, 1.0, 1.5, 2.0, 2.5}) {
        MeasurementConfig c;
        c.q = one;
        c.g = 0.0;
        c.z = CoherentLabel(zm, 0.3);
        c.alpha = CoherentLabel(1.0, 0.2);
        c.beta = CoherentLabel(0.5, 1.0);
        const auto d = photon_distribution(c, kPolicy);
        const double mean = zm * zm;
        double p = std::exp(-mean);
        for (std::size_t n = 0; n < d.probs.size(); ++n) {
            poisson = std::max(poisson, std::abs(d.probs[n] - p));
            p *= mean / static_cast<double>(n + 1);
        }
        mandel = std::max(mandel, std::abs(mandel_q(c, kPolicy)));
        g2 = std::max(g2, std::abs(g2_zero(c, kPolicy) - 1.0));
    }
    o.pass = wv <= 1e-12 && poisson <= 1e-10 && mandel <= 1e-10 && g2 <= 1e-10;
    o.summary = "q=1 reduction: |x2-x1| " + fmt(wv, 3) + " <= 1e-12, Poisson " + fmt(poisson, 3) + ", |Q| " +
                fmt(mandel, 3) + ", |g2-1| " + fmt(g2, 3) + " (all <= 1e-10)";
    return o;
}

// 3. g = 0 laws over a (q, |z|) grid, closed form and oracle separately
Outcome zero_coupling_laws() {
    Outcome o;
    double worst = 0.0;
    std::size_t points = 0;
    for (double qv : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0}) {
        const DeformationParameter q(qv);
        const double radius = std::min(convergence_radius(q), 9.0);
        for (double frac : {0.02, 0.1, 0.25, 0.5, 0.75, 0.9}) {
            const double r2 = frac * radius;
            MeasurementConfig c;
            c.q = q;
            c.z = CoherentLabel(std::sqrt(r2), 0.7);
            c.alpha = CoherentLabel(0.8, 0.1);
            c.beta = CoherentLabel(0.6, 2.0);
            const auto d = dual_expectations(c, weak_value(c), kPolicy);
            const double q_law = -(1.0 - qv) * r2;
            const cdouble comm_law(0.0, 1.0 - (1.0 - qv) * r2);
            for (const auto* e : {&d.closed, &d.oracle}) {
                worst = std::max({worst, std::abs(mandel_from(*e) - q_law), std::abs(e->commutator - comm_law)});
            }
            ++points;
        }
    }
    o.pass = worst <= 1e-10;
    o.summary = "g=0 laws: Q = -(1-q)|z|^2 and <[X,P]> = i(1-(1-q)|z|^2) on " + std::to_string(points) +
                " grid points, max deviation " + fmt(worst, 3) + " <= 1e-10";
    return o;
}

// 4. normalization of the photon distribution on the Fig. 2-4 presets
Outcome distribution_normalization() {
    Outcome o;
    double worst = 0.0;
    std::size_t points = 0, skipped = 0;
    for (const char* name : {"fig2", "fig3ab", "fig3cd", "fig4ab", "fig4cd"}) {
        auto s = preset_sweep(name);
        if (s.axis == Axis::N) s.axis_values = {0.0};  // one distribution per family value
        skipped += for_each_point(s, [&](const MeasurementConfig& c, double, double) {
            const auto d = photon_distribution(c, kPolicy);
            worst = std::max(worst, std::abs(d.total() - 1.0));
            ++points;
        });
    }
    o.pass = points > 0 && worst <= 1e-10;
    o.summary = "normalization: sum P(n) = 1 on " + std::to_string(points) + " in-domain preset points (" +
                std::to_string(skipped) + " out of domain), max |sum-1| " + fmt(worst, 3) + " <= 1e-10";
    return o;
}

// 5. uncertainty relation on every Fig. 5 sweep point
Outcome uncertainty() {
    Outcome o;
    double worst = INFINITY;
    std::size_t points = 0, skipped = 0, violations = 0;
    for (const char* name : {"fig5ab", "fig5cd", "fig5cd_text", "fig5ef", "fig5ef_text"}) {
        skipped += for_each_point(preset_sweep(name), [&](const MeasurementConfig& c, double, double) {
            const auto m = moments_from(closed_form_expectations(c, weak_value(c)));
            const double gap = m.uncertainty_product() - m.uncertainty_bound();
            worst = std::min(worst, gap);
            if (gap < -1e-10) ++violations;
            ++points;
        });
    }
    o.pass = points > 0 && violations == 0;
    o.summary = "uncertainty relation: " + std::to_string(points) + " Fig. 5 points (" + std::to_string(skipped) +
                " out of domain), min(product - bound) " + fmt(worst, 3) + " >= -1e-10";
    return o;
}

// 6a. Fig. 1: |weak value| crosses the eigenvalue baseline for some q* in (0.6, 0.95)
Outcome fig1_crossing() {
    Outcome o;
    const auto s = preset_sweep("fig1");
    std::vector<double> abs_cross, re_cross;
    double prev_q = 0.0, prev_abs = 0.0, prev_re = 0.0;
    bool first = true;
    for (int i = 50; i <= 1000; ++i) {
        const double qv = i / 1000.0;
        MeasurementConfig c = point_config(s, NAN, qv);
        c.observable = Observable::X2;
        const cdouble w = weak_value(c).value;
        const double base = eigenvalue_scale(c.z, c.q);
        const double d_abs = std::abs(w) - base;
        const double d_re = std::abs(w.real()) - base;
        if (!first) {
            if ((prev_abs > 0) != (d_abs > 0)) abs_cross.push_back(prev_q + (qv - prev_q) * prev_abs / (prev_abs - d_abs));
            if ((prev_re > 0) != (d_re > 0)) re_cross.push_back(prev_q + (qv - prev_q) * prev_re / (prev_re - d_re));
        }
        first = false;
        prev_q = qv;
        prev_abs = d_abs;
        prev_re = d_re;
    }
    const bool hit = std::any_of(abs_cross.begin(), abs_cross.end(), [](double q) { return q > 0.6 && q < 0.95; });
    o.pass = hit;
    auto list = [](const std::vector<double>& v) {
        std::string out;
        for (double x : v) out += (out.empty() ? "" : ", ") + fmt(x, 4);
        return out.empty() ? std::string("none") : out;
    };
    o.summary = "Fig. 1: |<X2>_w| crosses <z|X2|z> at q* = " + list(abs_cross) + ", required in (0.6, 0.95)";
    o.details.push_back("|Re <X2>_w| crossing at q* = " + list(re_cross));
    return o;
}

// 6b. Fig. 3: Q < 0 everywhere in domain, and Q(0.2) < Q(0.8) < Q(1) at fixed |z|
Outcome fig3_trends() {
    Outcome o;
    double max_q = -INFINITY;
    std::size_t points = 0, positive = 0;
    for (const char* name : {"fig3ab", "fig3cd"}) {
        for_each_point(preset_sweep(name), [&](const MeasurementConfig& c, double, double) {
            const double q = mandel_q(c, kPolicy);
            max_q = std::max(max_q, q);
            if (!(q < 0.0)) ++positive;
            ++points;
        });
    }

    const auto s = preset_sweep("fig3ab");
    bool ordered = true;
    const double fixed_z = 1.0;
    for (double zm : {0.25, 0.5, 0.75, 1.0}) {
        for (Observable obs : {Observable::X1, Observable::X2}) {
            std::vector<double> qs;
            for (double qv : {0.2, 0.8, 1.0}) {
                MeasurementConfig c = point_config(s, qv, zm);
                c.observable = obs;
                qs.push_back(mandel_q(c, kPolicy));
            }
            const bool ok = qs[0] < qs[1] && qs[1] < qs[2];
            if (zm == fixed_z) ordered = ordered && ok;
            o.details.push_back(std::string(zm == fixed_z ? "checked" : "info") + " |z|=" + fmt(zm) + " " +
                                std::string(to_string(obs)) + ": Q(0.2)=" + fmt(qs[0]) + " Q(0.8)=" + fmt(qs[1]) +
                                " Q(1)=" + fmt(qs[2]) + (ok ? " ordered" : " NOT ordered"));
        }
    }
    o.pass = points > 0 && positive == 0 && ordered;
    o.summary = "Fig. 3: Q < 0 at " + std::to_string(points - positive) + "/" + std::to_string(points) +
                " in-domain points (max " + fmt(max_q, 4) + "), Q(0.2) < Q(0.8) < Q(1) at |z|=1: " +
                (ordered ? "yes" : "no");
    return o;
}

// 6c. Fig. 4: every curve antibunched on a small-|z| interval and bunched further out
Outcome fig4_trends() {
    Outcome o;
    std::size_t curves = 0, good = 0;
    for (const char* name : {"fig4ab", "fig4cd"}) {
        auto s = preset_sweep(name);
        for (double fv : s.family_values) {
            for (Observable obs : s.observables) {
                bool small_anti = false, later_bunch = false, leading = true;
                double max_g2 = -INFINITY, z_at_max = 0.0, z_last = 0.0;
                for (int i = 1; i <= 200; ++i) {
                    const double zm = 0.01 * i;
                    MeasurementConfig c = point_config(s, fv, zm);
                    c.observable = obs;
                    // closed form: the oracle basis overflows this close to the radius
                    double g2 = 0.0;
                    try {
                        g2 = g2_from(closed_form_expectations(c, weak_value(c)));
                    } catch (const DomainError&) {
                        break;
                    }
                    z_last = zm;
                    if (leading && g2 < 1.0) small_anti = true;
                    else leading = false;
                    if (!leading && g2 > 1.0) later_bunch = true;
                    if (g2 > max_g2) {
                        max_g2 = g2;
                        z_at_max = zm;
                    }
                }
                const bool ok = small_anti && later_bunch;
                ++curves;
                if (ok) ++good;
                o.details.push_back(std::string(name) + " " + s.family + "=" + fmt(fv) + " " +
                                    std::string(to_string(obs)) + ": antibunched near 0 " + (small_anti ? "yes" : "no") +
                                    ", bunched further out " + (later_bunch ? "yes" : "no") + ", max g2 " +
                                    fmt(max_g2, 8) + " at |z|=" + fmt(z_at_max) + " (domain ends at |z|=" +
                                    fmt(z_last) + ")");
            }
        }
    }
    o.pass = curves > 0 && good == curves;
    o.summary = "Fig. 4: antibunching at small |z| then bunching at larger in-domain |z| on " +
                std::to_string(good) + "/" + std::to_string(curves) + " curves";
    return o;
}

// 6d. Fig. 5(c,d): P squeezed and X expanded over the whole sweep
Outcome fig5_trends() {
    Outcome o;
    std::size_t points = 0, good = 0;
    auto s = preset_sweep("fig5cd");
    for (double fv : s.family_values) {
        for (Observable obs : s.observables) {
            std::size_t curve_pts = 0, curve_good = 0;
            double first_fail = NAN, last_fail = NAN;
            for (double zm : s.axis_values) {
                MeasurementConfig c = point_config(s, fv, zm);
                c.observable = obs;
                QuadratureMoments m;
                try {
                    m = moments_from(closed_form_expectations(c, weak_value(c)));
                } catch (const DomainError&) {
                    continue;
                }
                const double half = 0.5 * std::abs(m.commutator_expect);
                const bool ok = m.var_p < half && m.var_x > half;
                ++curve_pts;
                if (ok) ++curve_good;
                else {
                    if (std::isnan(first_fail)) first_fail = zm;
                    last_fail = zm;
                }
            }
            points += curve_pts;
            good += curve_good;
            std::string line = "q=" + fmt(fv) + " " + std::string(to_string(obs)) + ": " + std::to_string(curve_good) +
                               "/" + std::to_string(curve_pts) + " points";
            if (curve_pts == 0) line += " (weak value out of domain)";
            else if (!std::isnan(first_fail)) line += ", fails for |z| in [" + fmt(first_fail) + ", " + fmt(last_fail) + "]";
            o.details.push_back(line);
        }
    }
    o.pass = points > 0 && good == points;
    o.summary = "Fig. 5(c,d): var_p < |<[X,P]>|/2 < var_x on " + std::to_string(good) + "/" + std::to_string(points) +
                " in-domain sweep points";
    return o;
}

// 7. byte-identical output across two consecutive CLI runs
Outcome determinism(const std::string& cli) {
    Outcome o;
    if (cli.empty()) {
        o.summary = "determinism: no CLI path given";
        return o;
    }
    const fs::path dir = fs::temp_directory_path() / ("qweak_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    std::vector<std::pair<std::string, std::string>> runs{{"verify", "verify --seed 42"}};
    for (const auto& p : presets()) runs.emplace_back(p.name, std::string(to_string(p.command)) + " --preset " + p.name);

    std::size_t identical = 0;
    for (const auto& [label, args] : runs) {
        std::string outputs[2];
        bool ran = true;
        for (int k = 0; k < 2; ++k) {
            const fs::path out = dir / (label + "_" + std::to_string(k));
            const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + out.string() + "\" 2>/dev/null";
            if (std::system(cmd.c_str()) != 0) ran = false;
            outputs[k] = slurp(out);
        }
        const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1];
        if (same) ++identical;
        else o.details.push_back(label + ": outputs differ or the run failed");
    }
    fs::remove_all(dir);
    o.pass = identical == runs.size();
    o.summary = "determinism: " + std::to_string(identical) + "/" + std::to_string(runs.size()) +
                " runs (verify --seed 42 and every preset) byte-identical";
    return o;
}

// 8. out-of-domain requests raise DomainError; Fig. 2 flags small q
Outcome domain_safety() {
    Outcome o;
    std::size_t probes = 0, raised = 0;
    for (double qv : {0.1, 0.5, 0.9, 0.99}) {
        const DeformationParameter q(qv);
        const double radius = convergence_radius(q);
        for (double factor : {0.9991, 1.0, 1.5, 10.0}) {
            for (double phase : {0.0, 1.0, std::numbers::pi}) {
                const cdouble x = std::polar(factor * radius, phase);
                ++probes;
                try {
                    (void)q_exp(x, q);
                } catch (const DomainError&) {
                    ++raised;
                }
                ++probes;
                try {
                    (void)fock::coherent_vector(std::polar(std::sqrt(factor * radius), phase), q, kPolicy);
                } catch (const DomainError&) {
                    ++raised;
                }
            }
        }
    }

    // preset family plus a dense q family through the 1/(1-q) = 2.25 threshold
    std::size_t below = 0, below_flagged = 0, above_computed = 0, above = 0;
    for (const std::string values : {std::string(), std::string("0.05,0.1,0.2,0.3,0.4,0.5,0.55,0.5555,0.56,0.6,0.7,0.8,0.9,1")}) {
        ParamMap overrides;
        if (!values.empty()) overrides["family_values"] = values;
        SweepSpec spec;
        spec.command = Command::PhotonDist;
        spec.preset = "fig2";
        spec.overrides = overrides;
        const auto resolved = resolve(spec);
        const auto result = run_sweep(resolved, kPolicy);
        const auto col = [&](const std::string& name) {
            return static_cast<std::size_t>(std::find(result.columns.begin(), result.columns.end(), name) -
                                            result.columns.begin());
        };
        const double z2 = std::pow(std::stod(resolved.params.at("z_modulus")), 2);
        for (const auto& row : result.rows) {
            const double qv = row[col("q")].number;
            const bool is_below = qv < 1.0 && 1.0 / (1.0 - qv) < z2;
            for (Observable obs : resolved.observables) {
                const std::string sfx = "_" + std::string(to_string(obs));
                const bool flagged = row[col("status" + sfx)].text == "out_of_domain" &&
                                     row[col("probability" + sfx)].kind == Cell::Kind::Empty;
                if (is_below) {
                    ++below;
                    if (flagged) ++below_flagged;
                } else if (1.0 / (1.0 - std::min(qv, 0.999999)) > z2 / kDomainMargin) {
                    ++above;
                    if (row[col("status" + sfx)].text == "ok") ++above_computed;
                }
            }
        }
    }
    o.pass = raised == probes && below > 0 && below_flagged == below && above_computed == above;
    o.summary = "domain safety: " + std::to_string(raised) + "/" + std::to_string(probes) +
                " out-of-radius requests raised DomainError; Fig. 2 rows with 1/(1-q) < 2.25 flagged " +
                std::to_string(below_flagged) + "/" + std::to_string(below) + ", in-domain rows computed " +
                std::to_string(above_computed) + "/" + std::to_string(above);
    return o;
}

// Not a criterion: how the printed transcriptions fare on the Fig. 5(c,d) trend.
void printed_forms_note() {
    auto s = preset_sweep("fig5cd");
    std::size_t pts = 0, ok = 0;
    for_each_point(s, [&](const MeasurementConfig& c, double, double) {
        const auto e = closed_form_expectations(c, weak_value(c), FormVariant::AsPrinted);
        const double half = 0.5 * std::abs(e.commutator);
        const double var_x = e.x_sq - e.x * e.x, var_p = e.p_sq - e.p * e.p;
        ++pts;
        if (var_p < half && var_x > half) ++ok;
    });
    std::cout << "      note: with the printed <P^2> sign the Fig. 5(c,d) trend holds on " << ok << "/" << pts
              << " points\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    struct Criterion {
        const char* id;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1", oracle_equivalence},
        {"2", undeformed_limit},
        {"3", zero_coupling_laws},
        {"4", distribution_normalization},
        {"5", uncertainty},
        {"6a", fig1_crossing},
        {"6b", fig3_trends},
        {"6c", fig4_trends},
        {"6d", fig5_trends},
        {"7", [&] { return determinism(cli); }},
        {"8", domain_safety},
    };

    std::size_t failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("raised: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << (std::string(c.id).size() == 1 ? "  " : " ") << o.summary
                  << "\n";
        for (const auto& d : o.details) std::cout << "      " << d << "\n";
        if (std::string(c.id) == "6d") printed_forms_note();
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
