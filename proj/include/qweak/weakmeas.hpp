#pragma once

#include <string>
#include <string_view>

#include "qweak/coherent_label.hpp"
#include "qweak/fockspace.hpp"
#include "qweak/qspecial.hpp"

namespace qweak {

enum class Observable { X1, X2 };

std::string_view to_string(Observable obs);
Observable parse_observable(std::string_view text);  // "x1" / "x2", case-insensitive

// One post-selected weak measurement: pointer |z>_q, pre-selection |alpha>_q,
// post-selection |beta>_q, dimensionless interaction strength g (= g t), and
// the measured system observable.
struct MeasurementConfig {
    DeformationParameter q = DeformationParameter::undeformed();
    double g = 0.0;
    CoherentLabel z;
    CoherentLabel alpha;
    CoherentLabel beta;
    Observable observable = Observable::X1;

    // Throws ConfigError for g < 0 or non-finite g.
    void validate() const;
};

struct WeakValue {
    cdouble value;
    // Set when |<beta|alpha>_q| < kAnomalousFidelity: post-selection is nearly
    // orthogonal and the weak value is far outside the spectrum.
    bool anomalous = false;
};

inline constexpr double kAnomalousFidelity = 1e-12;

// <beta|alpha>_q = e_q(beta* alpha) / sqrt(e_q(|beta|^2) e_q(|alpha|^2))
cdouble fidelity(const CoherentLabel& alpha, const CoherentLabel& beta, DeformationParameter q);

// (alpha + beta*)/sqrt2, independent of q.
WeakValue weak_value_x1(const CoherentLabel& alpha, const CoherentLabel& beta);

// q^{1/2} e_q(q^{1/2} alpha beta*) / e_q(alpha beta*) * (alpha + beta*)/sqrt2
WeakValue weak_value_x2(const CoherentLabel& alpha, const CoherentLabel& beta, DeformationParameter q);

// Weak value of config.observable.
WeakValue weak_value(const MeasurementConfig& config);

// <z|X2|z>_q, the reference magnitude the weak value is compared against.
double eigenvalue_scale(const CoherentLabel& z, DeformationParameter q);

// <beta|A|alpha> / <beta|alpha> from truncated ladder matrices. Only |alpha beta*|
// has to lie in the convergence domain, as for the closed forms.
cdouble oracle_weak_value(const CoherentLabel& alpha, const CoherentLabel& beta, DeformationParameter q,
                          Observable obs, const fock::DimPolicy& policy = fock::DimPolicy::from_environment());

// The bracket 1 + 2 sqrt2 Im(z) Im(g A_w) + g^2/2 |A_w|^2 (1 + (1+q)|z|^2 - 2 Re(z)^2 + 2 Im(z)^2),
// i.e. <Phi~|Phi~> / |<beta|alpha>|^2 for the unnormalized first-order pointer.
// Throws NonPositiveNorm when it is <= 0.
double norm_bracket(DeformationParameter q, double g, cdouble z, cdouble aw);

struct Normalization {
    double closed_form = 0.0;       // N(g, q) evaluated from the closed form
    double oracle = 0.0;            // 1 / || <beta|alpha> (|z> - i g A_w P|z>) || in the Fock basis
    double relative_disagreement = 0.0;
};

// Requires alpha, beta and z to be in the convergence domain.
Normalization normalization(const MeasurementConfig& config, const WeakValue& aw,
                            const fock::DimPolicy& policy = fock::DimPolicy::from_environment());

// Normalized first-order pointer N <beta|alpha> (|z> - i g A_w P|z>), built
// entirely in the truncated Fock basis. The constant phase of <beta|alpha> is
// dropped, so the vector depends on z, q and g A_w only. At least
// kPointerPadding zero rows are kept above the coherent-state truncation.
inline constexpr std::size_t kPointerPadding = 4;

fock::FockVector pointer_state(const MeasurementConfig& config, const WeakValue& aw,
                               const fock::DimPolicy& policy = fock::DimPolicy::from_environment());

}  // namespace qweak
