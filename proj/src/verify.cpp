#include "qweak/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qweak/errors.hpp"
#include "qweak/sweep.hpp"

namespace qweak::cli {
namespace {

constexpr double kInvariantSlack = 1e-10;
constexpr std::size_t kMaxFailuresListed = 50;

// Squared-modulus caps where the radius is infinite: |z|^2 <= 9 keeps dims under
// 256, |alpha|^2, |beta|^2 <= 4 keeps <beta|alpha> away from cancellation.
constexpr double kPointerCap = 9.0;
constexpr double kLabelCap = 4.0;

class Checker {
public:
    Checker(VerifyReport& report, double tol) : report_(report), tol_(tol) {}

    void context(std::string text) { context_ = std::move(text); }

    void delta(const std::string& name, double d) {
        ++report_.checks;
        auto& slot = report_.max_deltas[name];
        slot = std::max(slot, d);
        if (!(d <= tol_)) fail(name + " delta " + format_real(d));
    }

    void invariant(const std::string& name, bool ok, double value) {
        ++report_.checks;
        if (!ok) fail(name + " violated (" + format_real(value) + ")");
    }

    void fail(const std::string& what) {
        ++failures_;
        if (report_.failures.size() < kMaxFailuresListed) report_.failures.push_back(context_ + ": " + what);
    }

    std::size_t failures() const { return failures_; }

private:
    VerifyReport& report_;
    double tol_;
    std::string context_;
    std::size_t failures_ = 0;
};

MeasurementConfig sample(std::mt19937_64& rng, std::size_t index) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MeasurementConfig c;
    // every tenth sample sits exactly on the undeformed branch
    const double qv = index % 10 == 9 ? 1.0 : 0.1 + 0.9 * u(rng);
    c.q = DeformationParameter(qv);
    c.g = u(rng);
    const double radius = convergence_radius(c.q);
    const double rz = std::sqrt(0.9 * std::min(radius, kPointerCap));
    const double rl = std::sqrt(0.9 * std::min(radius, kLabelCap));
    const double two_pi = 2.0 * std::numbers::pi;
    c.z = CoherentLabel(rz * u(rng), two_pi * u(rng));
    c.alpha = CoherentLabel(rl * u(rng), two_pi * u(rng));
    c.beta = CoherentLabel(rl * u(rng), two_pi * u(rng));
    c.observable = index % 2 == 0 ? Observable::X1 : Observable::X2;
    return c;
}

std::string describe(const MeasurementConfig& c, std::size_t index) {
    std::ostringstream s;
    s << "config " << index << " (q=" << format_real(c.q.value()) << " g=" << format_real(c.g)
      << " z=" << format_real(c.z.modulus()) << "@" << format_real(c.z.phase())
      << " alpha=" << format_real(c.alpha.modulus()) << "@" << format_real(c.alpha.phase())
      << " beta=" << format_real(c.beta.modulus()) << "@" << format_real(c.beta.phase())
      << " observable=" << to_string(c.observable) << ")";
    return s.str();
}

void check_config(Checker& check, VerifyReport& report, const MeasurementConfig& c, FormVariant forms,
                  const fock::DimPolicy& policy) {
    const WeakValue aw = weak_value(c);

    // fidelity and weak values
    {
        // both labels truncated at the larger of their adaptive dimensions
        fock::DimPolicy shared = policy;
        shared.start = std::max(fock::choose_dimension(std::norm(c.alpha.value()), c.q, policy).dim,
                                fock::choose_dimension(std::norm(c.beta.value()), c.q, policy).dim);
        const auto va = fock::coherent_vector(c.alpha, c.q, shared);
        const auto vb = fock::coherent_vector(c.beta, c.q, shared);
        check.delta("fidelity", oracle_delta(fidelity(c.alpha, c.beta, c.q), fock::inner_product(vb, va)));
        check.delta("weak_value_x1", oracle_delta(weak_value_x1(c.alpha, c.beta).value,
                                                  oracle_weak_value(c.alpha, c.beta, c.q, Observable::X1, policy)));
        check.delta("weak_value_x2", oracle_delta(weak_value_x2(c.alpha, c.beta, c.q).value,
                                                  oracle_weak_value(c.alpha, c.beta, c.q, Observable::X2, policy)));
        if (c.q.is_undeformed()) {
            const double d = std::abs(weak_value_x2(c.alpha, c.beta, c.q).value - weak_value_x1(c.alpha, c.beta).value);
            check.invariant("x2 equals x1 at q=1", d <= 1e-12, d);
        }
    }

    check.delta("normalization", normalization(c, aw, policy).relative_disagreement);

    const DualExpectations d = dual_expectations(c, aw, policy, forms);
    report.max_dim = std::max(report.max_dim, d.pointer.dim());
    const auto& e = d.closed;
    const auto& o = d.oracle;

    // photon distribution, closed form against |<n|Phi>|^2
    {
        const auto dist = photon_distribution(c, aw, d.pointer.dim(), forms);
        const auto od = oracle_distribution(d.pointer);
        double worst = 0.0;
        for (std::size_t n = 0; n < od.size(); ++n) worst = std::max(worst, std::abs(dist.probs[n] - od[n]));
        check.delta("photon_distribution", worst);
        const double total = dist.total();
        check.invariant("probabilities sum to one", std::abs(total - 1.0) <= kInvariantSlack, total);
        const double lowest = *std::min_element(dist.probs.begin(), dist.probs.end());
        check.invariant("probabilities nonnegative", lowest >= -kNegativeProbabilityTolerance, lowest);
    }

    check.delta("mean_photon", oracle_delta(e.number, o.number));
    check.delta("number_sq", oracle_delta(e.number_sq, o.number_sq));
    check.delta("pair", oracle_delta(e.pair, o.pair));
    check.delta("mean_x", oracle_delta(e.x, o.x));
    check.delta("mean_p", oracle_delta(e.p, o.p));
    check.delta("second_moment_x", oracle_delta(e.x_sq, o.x_sq));
    check.delta("second_moment_p", oracle_delta(e.p_sq, o.p_sq));
    check.delta("cross_xp", oracle_delta(e.xp_sym, o.xp_sym));
    check.delta("commutator", oracle_delta(e.commutator, o.commutator));

    if (o.number > kZeroMeanPhoton) {
        const double q_closed = mandel_from(e, forms);
        check.delta("mandel_q", oracle_delta(q_closed, mandel_from(o)));
        check.delta("g2_zero", oracle_delta(g2_from(e), g2_from(o)));
        check.invariant("mandel_q >= -1", q_closed >= -1.0 - kInvariantSlack, q_closed);
    }

    const QuadratureMoments m = moments_from(e);
    const double gap = m.uncertainty_product() - m.uncertainty_bound();
    check.invariant("uncertainty relation", gap >= -kInvariantSlack, gap);
    check.invariant("commutator is imaginary", std::abs(m.commutator_expect.real()) <= kInvariantSlack,
                    m.commutator_expect.real());
    const double expected_comm = 1.0 - (1.0 - c.q.value()) * o.number;
    check.invariant("commutator tracks <n>", std::abs(m.commutator_expect.imag() - expected_comm) <= 1e-9,
                    m.commutator_expect.imag() - expected_comm);
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options, const fock::DimPolicy& policy) {
    if (!(options.tolerance > 0.0)) throw ConfigError("verify tolerance must be > 0");
    if (options.count == 0) throw ConfigError("verify needs at least one configuration");

    VerifyReport report;
    report.options = options;
    Checker check(report, options.tolerance);
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.count; ++i) {
        const MeasurementConfig c = sample(rng, i);
        check.context(describe(c, i));
        try {
            check_config(check, report, c, options.forms, policy);
        } catch (const Error& err) {
            check.fail(std::string("raised ") + err.what());
        }
        ++report.configs;
    }
    if (check.failures() > report.failures.size()) {
        report.failures.push_back("... " + std::to_string(check.failures() - report.failures.size()) +
                                  " further failures not listed");
    }
    return report;
}

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["tool"] = std::string(kToolName);
    doc["version"] = std::string(kToolVersion);
    doc["command"] = "verify";
    doc["seed"] = options.seed;
    doc["count"] = options.count;
    doc["tolerance"] = options.tolerance;
    doc["closed_forms"] = options.forms == FormVariant::Corrected ? "corrected" : "printed";
    doc["sampling"] = {{"q", "[0.1, 1], every tenth exactly 1"},
                       {"g", "[0, 1]"},
                       {"z_modulus_sq", "<= 0.9 * min(radius, 9)"},
                       {"label_modulus_sq", "<= 0.9 * min(radius, 4)"}};
    doc["configs"] = configs;
    doc["checks"] = checks;
    doc["max_dim"] = max_dim;
    doc["max_deltas"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : max_deltas) doc["max_deltas"][k] = v;
    doc["passed"] = passed();
    doc["failures"] = failures;
    return doc.dump(2) + "\n";
}

}  // namespace qweak::cli
