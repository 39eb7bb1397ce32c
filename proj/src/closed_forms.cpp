// Closed-form pointer statistics for the first-order post-selected pointer
//   |Phi> ~ |z> - i g A_w P |z>.
// Each bracket below is the unnormalized expectation divided by
// |<beta|alpha>|^2; dividing by norm_bracket() normalizes it.
#include <algorithm>
#include <cmath>

#include "qweak/errors.hpp"
#include "qweak/photonstats.hpp"

namespace qweak {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

struct Args {
    double q;
    double g;
    cdouble z;
    cdouble zc;
    cdouble aw;
    double r2;       // |z|^2
    double aw2;      // |A_w|^2
    double re_z2s;   // z^2 + z*^2 (real)
};

Args make_args(const MeasurementConfig& config, const WeakValue& aw) {
    const cdouble z = config.z.value();
    return {config.q.value(), config.g, z, std::conj(z), aw.value, std::norm(z), std::norm(aw.value),
            2.0 * (z * z).real()};
}

double re(cdouble v) { return v.real(); }

// <a^+ a>, as in the numerator and denominator of the Mandel parameter
double number_bracket(const Args& a) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    return r2 + (2.0 * g / kSqrt2) * re(A * (zc + (q * zc - z) * r2)) +
           0.5 * g * g * A2 * (1.0 + (q + 2.0 - s2) * q * r2 + (1.0 + q * q * q) * r2 * r2 - s2);
}

// <a^+ a>, as written in the denominator of g2(0)
double number_bracket_g2_form(const Args& a) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    return r2 + (2.0 * g / kSqrt2) * re(A * (zc + q * zc * r2 - z * r2)) +
           0.5 * g * g * A2 * (1.0 - s2 - (q * s2 - 2.0 * q - q * q) * r2 + (1.0 + q * q * q) * r2 * r2);
}

// <(a^+ a)^2>
double number_sq_bracket(const Args& a) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    const double q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q, q6 = q5 * q;
    const double r4 = r2 * r2, r6 = r4 * r2;
    return r2 + q * r4 +
           (2.0 * g / kSqrt2) * re(A * (zc + (2.0 * q * zc + q2 * zc - z) * r2 + (q3 * zc - q * z) * r4)) +
           0.5 * g * g * A2 *
               (1.0 - s2 - ((2.0 * q + q2) * s2 - (q3 + 3.0 * q2 + 3.0 * q)) * r2 -
                (q3 * s2 - (q5 + 2.0 * q4 + 3.0 * q3) - 1.0) * r4 + (q6 + q) * r6);
}

// <a^+2 a^2>
double pair_bracket(const Args& a) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    const double q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q;
    const double r4 = r2 * r2, r6 = r4 * r2;
    return r4 + (2.0 * g / kSqrt2) * re(A * ((1.0 + q) * zc * r2 + (q2 * zc - z) * r4)) +
           0.5 * g * g * A2 *
               ((q2 + 2.0 * q + 1.0 - (1.0 + q) * s2) * r2 - (q2 * s2 - 2.0 * q3 - 2.0 * q2 - q4) * r4 +
                (1.0 + q5) * r6);
}

// <X^2> (s = +1) and <P^2> (s = -1). `g_sign` multiplies the first-order
// term: the exact expansion has +1 for both quadratures.
double quadrature_sq_bracket(const Args& a, double s, double g_sign) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    const double q2 = q * q, q3 = q2 * q, q4 = q3 * q;
    const cdouble z3 = z * z * z, zc3 = zc * zc * zc;
    const cdouble w = zc - z + s * zc3 - s * z3 + (1.0 + q) * (zc + s * z) +
                      (s * q2 * z + q * (1.0 + q) * zc - (1.0 + q) * z - s * zc) * r2;
    const double v = s * 2.0 * (z * z * z * z).real() + ((2.0 - s) + (1.0 - s) * q - s * q2) * s2 +
                     (-s * q3 + q2 + q - s) * s2 * r2 + (-q3 - 3.0 * q2 - (3.0 - 2.0 * s) * q - s * (-2.0 + s)) * r2 -
                     (q4 + q3 - 2.0 * s * q2 + q + 1.0) * r2 * r2 - q - 2.0;
    return 0.5 * (1.0 + s * s2 + (1.0 + q) * r2 + g_sign * kSqrt2 * g * re(A * w) - 0.5 * g * g * A2 * v);
}

// <X> (s = +1) and <P> (s = -1)
double quadrature_mean_bracket(const Args& a, double s) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    const double q2 = q * q;
    const cdouble i(0.0, 1.0);
    const cdouble z3 = z * z * z, zc3 = zc * zc * zc;
    const cdouble phase = s > 0 ? cdouble(1.0) : i;  // i^{1/2 -+ 1/2}
    const cdouble inner_arg = A * (1.0 + s * zc * zc - z * z + (q - s) * r2);
    const double projected = s > 0 ? inner_arg.real() : inner_arg.imag();  // Re (Im)
    const cdouble tail = zc3 + s * z3 - q * (zc + s * z) + (1.0 - s) * (z - zc) + (-s * q2 + q - s) * z * r2 -
                         (q2 - s * q + 1.0) * zc * r2;
    const cdouble braces = zc + s * z + s * kSqrt2 * g * phase * projected - 0.5 * g * g * A2 * tail;
    return (phase * braces / kSqrt2).real();
}

// <[X, P]>
cdouble commutator_bracket(const Args& a) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    const double q2 = q * q, q3 = q2 * q, q4 = q3 * q;
    const cdouble i(0.0, 1.0);
    const cdouble z2 = z * z, zc2 = zc * zc;
    const cdouble z3 = z2 * z, zc3 = zc2 * zc;
    const cdouble first = z3 + zc3 + q * zc - (2.0 + q) * z + (q2 - q - 1.0) * zc * r2 - (q2 + q - 1.0) * z * r2;
    const cdouble second = z3 + zc3 - q * (z + zc) - (q2 - q + 1.0) * z * r2 - (q2 - q + 1.0) * zc * r2;
    const cdouble third = zc2 * zc2 - z2 * z2 - (q3 + q2 - q + 1.0) * r2 + (q2 + 2.0 * q + 1.0) * z2 -
                          (1.0 + q2) * zc2 - (q3 - q2 + q + 1.0) * zc2 * r2 + (q3 + q2 - q + 1.0) * z2 * r2 -
                          (q4 - q3 + q - 1.0) * r2 * r2 - q;
    return i * (1.0 - r2 + q * r2) + i * (g / kSqrt2) * re(A * first) - i * (g / kSqrt2) * re(A * second) -
           i * (0.5 * g * g * A2) * re(third);
}

// <(XP + PX)/2>
double xp_symmetric_bracket(const Args& a) {
    const auto& [q, g, z, zc, A, r2, A2, s2] = a;
    const cdouble i(0.0, 1.0);
    const cdouble z2 = z * z;
    const double im_z2 = z2.imag();
    const double im_z4 = (z2 * z2).imag();
    const cdouble w1 = i * (z2 * z + zc * zc * zc - q * q * z2 * zc - z * zc * zc - (1.0 + q) * z);
    const double w2 = -im_z4 + (1.0 + q * q * q) * r2 * im_z2 + (1.0 + q + q * q) * im_z2;
    return im_z2 + (g / kSqrt2) * re(A * w1) + 0.5 * g * g * A2 * w2;
}

}  // namespace

PointerExpectations closed_form_expectations(const MeasurementConfig& config, const WeakValue& aw,
                                             FormVariant variant) {
    config.validate();
    require_convergence_domain(config.z.modulus() * config.z.modulus(), config.q, "pointer |z|^2");
    const Args a = make_args(config, aw);
    const double k = 1.0 / norm_bracket(config.q, config.g, a.z, a.aw);
    const double p_sign = variant == FormVariant::Corrected ? 1.0 : -1.0;

    PointerExpectations e;
    e.number = k * number_bracket(a);
    e.number_sq = k * number_sq_bracket(a);
    e.pair = k * pair_bracket(a);
    e.x = k * quadrature_mean_bracket(a, +1.0);
    e.p = k * quadrature_mean_bracket(a, -1.0);
    e.x_sq = k * quadrature_sq_bracket(a, +1.0, 1.0);
    e.p_sq = k * quadrature_sq_bracket(a, -1.0, p_sign);
    e.xp_sym = k * xp_symmetric_bracket(a);
    e.commutator = k * commutator_bracket(a);
    // the g2(0) denominator is printed as its own bracket; it must coincide
    // with the one from the Mandel parameter
    const double alt = k * number_bracket_g2_form(a);
    if (std::abs(alt - e.number) > 1e-12 * std::max(1.0, std::abs(alt))) {
        throw Error("closed forms: inconsistent <a^+ a> brackets");
    }
    return e;
}

PhotonDistribution photon_distribution(const MeasurementConfig& config, const WeakValue& aw, std::size_t count,
                                       FormVariant variant) {
    config.validate();
    const cdouble z = config.z.value();
    const double zz = std::norm(z);
    require_convergence_domain(zz, config.q, "photon_distribution |z|^2");
    const double k = 1.0 / norm_bracket(config.q, config.g, z, aw.value);
    const double e = q_exp(zz, config.q, 1e-16).value.real();
    const cdouble w = config.g * aw.value / kSqrt2;
    const cdouble lead = 1.0 - w * z;

    PhotonDistribution out;
    out.config = config;
    out.probs.resize(count);
    cdouble u_prev = 0.0;  // z^{n-1}/sqrt([n-1]!)
    cdouble u = 1.0;       // z^n/sqrt([n]!)
    for (std::size_t n = 0; n < count; ++n) {
        const double qn = q_number(n, config.q);
        const cdouble amp = variant == FormVariant::Corrected ? lead * u + w * std::sqrt(qn) * u_prev : lead * u;
        out.probs[n] = k * std::norm(amp) / e;
        u_prev = u;
        u *= z / std::sqrt(q_number(n + 1, config.q));
    }
    return out;
}

}  // namespace qweak
