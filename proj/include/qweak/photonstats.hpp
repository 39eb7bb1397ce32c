#pragma once

#include <map>
#include <string>
#include <vector>

#include "qweak/fockspace.hpp"
#include "qweak/weakmeas.hpp"

namespace qweak {

// Which transcription of the closed forms to evaluate. `AsPrinted` reproduces
// three published expressions that disagree with the exact first-order pointer
// (photon distribution without the a^+ term, Mandel Q without the square on
// <n>, and the sign of the first-order term in <P^2>); it exists for
// diagnostics and for exercising the verification harness.
enum class FormVariant { Corrected, AsPrinted };

// Normalized pointer expectation values for A = a_q (the pointer annihilator),
// X = (a^+ + a)/sqrt2 and P = i(a^+ - a)/sqrt2.
struct PointerExpectations {
    double number = 0.0;         // <a^+ a>
    double number_sq = 0.0;      // <(a^+ a)^2>
    double pair = 0.0;           // <a^+2 a^2>
    double x = 0.0;              // <X>
    double p = 0.0;              // <P>
    double x_sq = 0.0;           // <X^2>
    double p_sq = 0.0;           // <P^2>
    double xp_sym = 0.0;         // <(XP + PX)/2>
    cdouble commutator;          // <[X, P]>
};

PointerExpectations closed_form_expectations(const MeasurementConfig& config, const WeakValue& aw,
                                             FormVariant variant = FormVariant::Corrected);

PointerExpectations oracle_expectations(const fock::FockVector& pointer, DeformationParameter q);

// Both evaluations for one configuration, plus the pointer the oracle used.
struct DualExpectations {
    PointerExpectations closed;
    PointerExpectations oracle;
    fock::FockVector pointer;
};

DualExpectations dual_expectations(const MeasurementConfig& config, const WeakValue& aw,
                                   const fock::DimPolicy& policy = fock::DimPolicy::from_environment(),
                                   FormVariant variant = FormVariant::Corrected);

struct PhotonDistribution {
    std::vector<double> probs;  // P(n), n = 0 .. probs.size()-1
    MeasurementConfig config;
    double tail_bound = 0.0;    // bound on the probability mass beyond probs.size()

    double total() const;
};

// Probabilities below this are rounding noise; anything more negative is reported.
inline constexpr double kNegativeProbabilityTolerance = 1e-15;

PhotonDistribution photon_distribution(const MeasurementConfig& config,
                                       const fock::DimPolicy& policy = fock::DimPolicy::from_environment());

PhotonDistribution photon_distribution(const MeasurementConfig& config, const WeakValue& aw, std::size_t count,
                                       FormVariant variant = FormVariant::Corrected);

// |<n|Phi>|^2 read off a pointer vector.
std::vector<double> oracle_distribution(const fock::FockVector& pointer);

struct QuadratureMoments {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    cdouble cross_xp;            // <XP>
    cdouble commutator_expect;   // <[X, P]>
    bool squeezed_x = false;     // var_x < |<[X,P]>|/2
    bool squeezed_p = false;

    double uncertainty_product() const { return var_x * var_p; }
    double uncertainty_bound() const { return 0.25 * std::norm(commutator_expect); }
};

QuadratureMoments moments_from(const PointerExpectations& e);

// Q = (<n^2> - <n>^2)/<n> - 1 with n = a^+ a. Throws ZeroMeanPhoton for <n> <= 1e-14.
double mandel_from(const PointerExpectations& e, FormVariant variant = FormVariant::Corrected);
// <a^+2 a^2> / <a^+ a>^2
double g2_from(const PointerExpectations& e);

inline constexpr double kZeroMeanPhoton = 1e-14;
inline constexpr double kOracleAgreement = 1e-8;

// |a - b| / max(|a|, |b|, 1).
double oracle_delta(double a, double b);
double oracle_delta(cdouble a, cdouble b);

// Closed-form values; each also evaluates the Fock oracle and emits a
// diagnostic when they disagree by more than kOracleAgreement.
double mandel_q(const MeasurementConfig& config, const fock::DimPolicy& policy = fock::DimPolicy::from_environment());
double g2_zero(const MeasurementConfig& config, const fock::DimPolicy& policy = fock::DimPolicy::from_environment());
QuadratureMoments quadrature_moments(const MeasurementConfig& config,
                                     const fock::DimPolicy& policy = fock::DimPolicy::from_environment());

struct StatisticsReport {
    double mandel_q = 0.0;
    double g2_zero = 0.0;
    double mean_photon = 0.0;
    WeakValue weak_value;
    PhotonDistribution distribution;
    QuadratureMoments moments;
    std::map<std::string, double> oracle_deltas;

    double max_oracle_delta() const;
};

StatisticsReport statistics_report(const MeasurementConfig& config,
                                   const fock::DimPolicy& policy = fock::DimPolicy::from_environment());

}  // namespace qweak
