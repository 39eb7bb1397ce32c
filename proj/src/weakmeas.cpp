#include "qweak/weakmeas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "qweak/diagnostics.hpp"
#include "qweak/errors.hpp"

namespace qweak {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

std::string_view to_string(Observable obs) { return obs == Observable::X1 ? "x1" : "x2"; }

Observable parse_observable(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "x1") return Observable::X1;
    if (lower == "x2") return Observable::X2;
    throw ConfigError("unknown observable '" + std::string(text) + "' (expected x1 or x2)");
}

void MeasurementConfig::validate() const {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("coupling g must be finite and >= 0");
}

cdouble fidelity(const CoherentLabel& alpha, const CoherentLabel& beta, DeformationParameter q) {
    const cdouble a = alpha.value();
    const cdouble b = beta.value();
    require_convergence_domain(std::norm(a), q, "fidelity(|alpha|^2)");
    require_convergence_domain(std::norm(b), q, "fidelity(|beta|^2)");
    const cdouble overlap = e_q(std::conj(b) * a, q);
    return overlap / std::sqrt(e_q(std::norm(b), q).real() * e_q(std::norm(a), q).real());
}

WeakValue weak_value_x1(const CoherentLabel& alpha, const CoherentLabel& beta) {
    return {(alpha.value() + std::conj(beta.value())) * kInvSqrt2, false};
}

WeakValue weak_value_x2(const CoherentLabel& alpha, const CoherentLabel& beta, DeformationParameter q) {
    const cdouble w = alpha.value() * std::conj(beta.value());
    require_convergence_domain(std::abs(w), q, "weak_value_x2(alpha beta*)");
    const double root_q = std::sqrt(q.value());
    const cdouble ratio = q.is_undeformed() ? cdouble(1.0) : root_q * e_q(root_q * w, q) / e_q(w, q);
    return {ratio * weak_value_x1(alpha, beta).value, false};
}

WeakValue weak_value(const MeasurementConfig& config) {
    WeakValue aw = config.observable == Observable::X1 ? weak_value_x1(config.alpha, config.beta)
                                                       : weak_value_x2(config.alpha, config.beta, config.q);
    const double a2 = config.alpha.modulus() * config.alpha.modulus();
    const double b2 = config.beta.modulus() * config.beta.modulus();
    if (in_convergence_domain(a2, config.q) && in_convergence_domain(b2, config.q)) {
        aw.anomalous = std::abs(fidelity(config.alpha, config.beta, config.q)) < kAnomalousFidelity;
    }
    return aw;
}

double eigenvalue_scale(const CoherentLabel& z, DeformationParameter q) {
    require_convergence_domain(z.modulus() * z.modulus(), q, "eigenvalue_scale");
    return weak_value_x2(z, z, q).value.real();
}

cdouble oracle_weak_value(const CoherentLabel& alpha, const CoherentLabel& beta, DeformationParameter q,
                          Observable obs, const fock::DimPolicy& policy) {
    const double r2 = alpha.modulus() * beta.modulus();
    require_convergence_domain(r2, q, "oracle_weak_value");
    const std::size_t dim = fock::choose_dimension(r2, q, policy).dim + 2;
    const auto n = static_cast<Eigen::Index>(dim);

    // Conjugating by diag(s^n) gives both vectors the modulus sqrt(|alpha beta|),
    // so neither blows up when only the product is convergent.
    const double s = (alpha.modulus() > 0.0 && beta.modulus() > 0.0) ? std::sqrt(beta.modulus() / alpha.modulus()) : 1.0;
    const cdouble za = alpha.value() * s;
    const cdouble zb = beta.value() / s;
    fock::Vector va(n), vb(n);
    cdouble ca = 1.0, cb = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        va[k] = ca;
        vb[k] = cb;
        const double root = std::sqrt(q_number(static_cast<std::size_t>(k) + 1, q));
        ca *= za / root;
        cb *= zb / root;
    }
    const auto quad = fock::build_quadratures(q, dim);
    fock::Matrix op = (obs == Observable::X1 ? quad.x1 : quad.x2).entries();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        op(i, i + 1) /= s;
        op(i + 1, i) *= s;
    }
    return vb.dot(op * va) / vb.dot(va);
}

double norm_bracket(DeformationParameter q, double g, cdouble z, cdouble aw) {
    const double qv = q.value();
    const double zz = std::norm(z);
    const double bracket = 1.0 + 2.0 * std::sqrt(2.0) * z.imag() * (g * aw).imag() +
                           0.5 * g * g * std::norm(aw) *
                               (1.0 + (1.0 + qv) * zz - 2.0 * z.real() * z.real() + 2.0 * z.imag() * z.imag());
    if (!(bracket > 0.0)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "norm bracket " << bracket << " <= 0 (g=" << g << ", |A_w|=" << std::abs(aw)
            << "): outside the first-order regime";
        throw NonPositiveNorm(msg.str());
    }
    return bracket;
}

namespace {

// |z> - i g A_w P|z>, with the vector padded so P acts without truncation.
fock::FockVector unnormalized_pointer(const MeasurementConfig& config, const WeakValue& aw, fock::DimPolicy policy) {
    policy.padding = std::max(policy.padding, kPointerPadding);
    const fock::FockVector z = fock::coherent_vector(config.z, config.q, policy);
    const auto quad = fock::build_quadratures(config.q, z.dim());
    const cdouble i(0.0, 1.0);
    fock::Vector phi = z.coeffs - (i * config.g * aw.value) * (quad.p.entries() * z.coeffs);
    return fock::FockVector{std::move(phi), z.tail_norm, false};
}

}  // namespace

Normalization normalization(const MeasurementConfig& config, const WeakValue& aw, const fock::DimPolicy& policy) {
    config.validate();
    const double fid2 = std::norm(fidelity(config.alpha, config.beta, config.q));
    const double bracket = norm_bracket(config.q, config.g, config.z.value(), aw.value);

    Normalization out;
    out.closed_form = 1.0 / std::sqrt(fid2 * bracket);
    const fock::FockVector phi = unnormalized_pointer(config, aw, policy);
    out.oracle = 1.0 / std::sqrt(fid2 * phi.squared_norm());
    out.relative_disagreement = std::abs(out.closed_form - out.oracle) / out.oracle;
    if (out.relative_disagreement > 1e-8) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "normalization: closed form " << out.closed_form << " vs oracle " << out.oracle;
        emit_diagnostic(msg.str());
    }
    return out;
}

fock::FockVector pointer_state(const MeasurementConfig& config, const WeakValue& aw, const fock::DimPolicy& policy) {
    config.validate();
    fock::FockVector phi = unnormalized_pointer(config, aw, policy);
    const double norm = phi.coeffs.norm();
    if (!(norm > 0.0)) throw NonPositiveNorm("pointer_state: vanishing pointer norm");
    phi.coeffs /= norm;
    phi.normalized = true;
    return phi;
}

}  // namespace qweak
