#include "qweak/photonstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qweak/diagnostics.hpp"
#include "qweak/errors.hpp"

namespace qweak {
namespace {

void clamp_probabilities(std::vector<double>& probs, const char* where) {
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (probs[n] >= 0.0) continue;
        if (probs[n] < -kNegativeProbabilityTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << where << ": P(" << n << ")=" << probs[n] << " clamped to 0";
            emit_diagnostic(msg.str());
        }
        probs[n] = 0.0;
    }
}

void report_disagreement(const char* quantity, double closed, double oracle) {
    if (oracle_delta(closed, oracle) <= kOracleAgreement) return;
    std::ostringstream msg;
    msg.precision(17);
    msg << quantity << ": closed form " << closed << " vs Fock oracle " << oracle;
    emit_diagnostic(msg.str());
}

double clamp_variance(double v, const char* which) {
    if (v >= 0.0) return v;
    if (v < -1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "variance of " << which << " = " << v << " clamped to 0";
        emit_diagnostic(msg.str());
    }
    return 0.0;
}

}  // namespace

double oracle_delta(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

double oracle_delta(cdouble a, cdouble b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

PointerExpectations oracle_expectations(const fock::FockVector& pointer, DeformationParameter q) {
    const std::size_t dim = pointer.dim();
    const auto a = fock::build_annihilator(q, dim);
    const auto ad = fock::build_creation(q, dim);
    const auto quad = fock::build_quadratures(q, dim);

    const fock::FockVector a_phi = a.apply(pointer);
    const fock::FockVector aa_phi = a.apply(a_phi);
    const fock::FockVector n_phi = ad.apply(a_phi);
    const fock::FockVector x_phi = quad.x1.apply(pointer);
    const fock::FockVector p_phi = quad.p.apply(pointer);

    PointerExpectations e;
    e.number = a_phi.squared_norm();
    e.number_sq = n_phi.squared_norm();
    e.pair = aa_phi.squared_norm();
    e.x = fock::expectation(quad.x1, pointer).real();
    e.p = fock::expectation(quad.p, pointer).real();
    e.x_sq = x_phi.squared_norm();
    e.p_sq = p_phi.squared_norm();
    const cdouble xp = fock::inner_product(x_phi, p_phi);  // <XP>
    e.xp_sym = xp.real();
    e.commutator = cdouble(0.0, 2.0 * xp.imag());
    return e;
}

double PhotonDistribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

std::vector<double> oracle_distribution(const fock::FockVector& pointer) {
    std::vector<double> probs(pointer.dim());
    for (std::size_t n = 0; n < probs.size(); ++n) probs[n] = std::norm(pointer.coeffs[static_cast<Eigen::Index>(n)]);
    return probs;
}

namespace {

PhotonDistribution checked_distribution(const MeasurementConfig& config, const WeakValue& aw,
                                        const fock::FockVector& pointer) {
    PhotonDistribution dist = photon_distribution(config, aw, pointer.dim());
    clamp_probabilities(dist.probs, "photon_distribution");

    const double k = 1.0 / norm_bracket(config.q, config.g, config.z.value(), aw.value);
    const cdouble w = config.g * aw.value / std::sqrt(2.0);
    const double x = config.z.modulus() * config.z.modulus();
    dist.tail_bound =
        2.0 * k * (std::norm(1.0 - w * config.z.value()) + std::norm(w) * (1.0 + config.q.value() * x)) *
        pointer.tail_norm;

    const auto oracle = oracle_distribution(pointer);
    double worst = 0.0;
    for (std::size_t n = 0; n < oracle.size(); ++n) worst = std::max(worst, std::abs(dist.probs[n] - oracle[n]));
    if (worst > 1e-10) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "photon_distribution: closed form differs from |<n|Phi>|^2 by " << worst;
        emit_diagnostic(msg.str());
    }
    return dist;
}

}  // namespace

PhotonDistribution photon_distribution(const MeasurementConfig& config, const fock::DimPolicy& policy) {
    const WeakValue aw = weak_value(config);
    return checked_distribution(config, aw, pointer_state(config, aw, policy));
}

QuadratureMoments moments_from(const PointerExpectations& e) {
    QuadratureMoments m;
    m.mean_x = e.x;
    m.mean_p = e.p;
    m.var_x = clamp_variance(e.x_sq - e.x * e.x, "X");
    m.var_p = clamp_variance(e.p_sq - e.p * e.p, "P");
    m.commutator_expect = e.commutator;
    m.cross_xp = cdouble(e.xp_sym, 0.0) + 0.5 * e.commutator;
    const double half = 0.5 * std::abs(e.commutator);
    m.squeezed_x = m.var_x < half;
    m.squeezed_p = m.var_p < half;
    return m;
}

double mandel_from(const PointerExpectations& e, FormVariant variant) {
    if (e.number <= kZeroMeanPhoton) throw ZeroMeanPhoton("Mandel parameter: <a^+ a> vanishes");
    const double subtracted = variant == FormVariant::Corrected ? e.number * e.number : e.number;
    return (e.number_sq - subtracted) / e.number - 1.0;
}

double g2_from(const PointerExpectations& e) {
    if (e.number <= kZeroMeanPhoton) throw ZeroMeanPhoton("g2(0): <a^+ a> vanishes");
    return e.pair / (e.number * e.number);
}

DualExpectations dual_expectations(const MeasurementConfig& config, const WeakValue& aw, const fock::DimPolicy& policy,
                                   FormVariant variant) {
    DualExpectations out{closed_form_expectations(config, aw, variant), {}, pointer_state(config, aw, policy)};
    out.oracle = oracle_expectations(out.pointer, config.q);
    return out;
}

double mandel_q(const MeasurementConfig& config, const fock::DimPolicy& policy) {
    const auto both = dual_expectations(config, weak_value(config), policy);
    const double closed = mandel_from(both.closed);
    report_disagreement("mandel_q", closed, mandel_from(both.oracle));
    return closed;
}

double g2_zero(const MeasurementConfig& config, const fock::DimPolicy& policy) {
    const auto both = dual_expectations(config, weak_value(config), policy);
    const double closed = g2_from(both.closed);
    report_disagreement("g2_zero", closed, g2_from(both.oracle));
    return closed;
}

QuadratureMoments quadrature_moments(const MeasurementConfig& config, const fock::DimPolicy& policy) {
    const auto both = dual_expectations(config, weak_value(config), policy);
    const QuadratureMoments closed = moments_from(both.closed);
    const QuadratureMoments oracle = moments_from(both.oracle);
    report_disagreement("var_x", closed.var_x, oracle.var_x);
    report_disagreement("var_p", closed.var_p, oracle.var_p);
    report_disagreement("mean_x", closed.mean_x, oracle.mean_x);
    report_disagreement("mean_p", closed.mean_p, oracle.mean_p);
    report_disagreement("commutator", closed.commutator_expect.imag(), oracle.commutator_expect.imag());
    return closed;
}

double StatisticsReport::max_oracle_delta() const {
    double worst = 0.0;
    for (const auto& [name, d] : oracle_deltas) worst = std::max(worst, d);
    return worst;
}

StatisticsReport statistics_report(const MeasurementConfig& config, const fock::DimPolicy& policy) {
    StatisticsReport r;
    r.weak_value = weak_value(config);
    const auto both = dual_expectations(config, r.weak_value, policy);
    const auto& pointer = both.pointer;
    const auto& c = both.closed;
    const auto& o = both.oracle;

    r.mean_photon = c.number;
    r.mandel_q = mandel_from(c);
    r.g2_zero = g2_from(c);
    r.moments = moments_from(c);
    r.distribution = checked_distribution(config, r.weak_value, pointer);

    const QuadratureMoments om = moments_from(o);
    auto& d = r.oracle_deltas;
    d["mean_photon"] = oracle_delta(c.number, o.number);
    d["mandel_q"] = oracle_delta(r.mandel_q, mandel_from(o));
    d["g2_zero"] = oracle_delta(r.g2_zero, g2_from(o));
    d["mean_x"] = oracle_delta(r.moments.mean_x, om.mean_x);
    d["mean_p"] = oracle_delta(r.moments.mean_p, om.mean_p);
    d["second_moment_x"] = oracle_delta(c.x_sq, o.x_sq);
    d["second_moment_p"] = oracle_delta(c.p_sq, o.p_sq);
    d["var_x"] = oracle_delta(r.moments.var_x, om.var_x);
    d["var_p"] = oracle_delta(r.moments.var_p, om.var_p);
    d["cross_xp"] = oracle_delta(r.moments.cross_xp, om.cross_xp);
    d["commutator"] = oracle_delta(r.moments.commutator_expect, om.commutator_expect);
    const auto od = oracle_distribution(pointer);
    double worst = 0.0;
    for (std::size_t n = 0; n < od.size(); ++n) worst = std::max(worst, oracle_delta(r.distribution.probs[n], od[n]));
    d["photon_distribution"] = worst;

    for (const auto& [name, delta] : d) {
        if (delta > kOracleAgreement) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "statistics_report: " << name << " oracle delta " << delta;
            emit_diagnostic(msg.str());
        }
    }
    return r;
}

}  // namespace qweak
