#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "qweak/coherent_label.hpp"
#include "qweak/qspecial.hpp"

// Truncated number-basis representation of the Arik-Coon oscillator
// a a^+ - q a^+ a = 1. Everything here is built from matrix elements only
// and serves as the brute-force reference for the closed forms.
namespace qweak::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct FockVector {
    Vector coeffs;
    double tail_norm = 0.0;  // bound on the squared norm of discarded basis states
    bool normalized = false;

    std::size_t dim() const { return static_cast<std::size_t>(coeffs.size()); }
    double squared_norm() const { return coeffs.squaredNorm(); }
};

class FockOperator {
public:
    FockOperator(Matrix entries, bool hermitian);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    bool is_hermitian() const { return hermitian_; }

    FockOperator adjoint() const;
    FockVector apply(const FockVector& v) const;

    friend FockOperator operator*(const FockOperator& a, const FockOperator& b);
    friend FockOperator operator+(const FockOperator& a, const FockOperator& b);
    friend FockOperator operator-(const FockOperator& a, const FockOperator& b);

private:
    Matrix entries_;
    bool hermitian_;
};

// Adaptive truncation: start at `start`, double until the analytic tail bound
// of the coherent-state mass is <= tail_target. `padding` zero rows are
// appended so that a few ladder steps never reach the truncation edge.
struct DimPolicy {
    std::size_t start = 32;
    std::size_t max_dim = 4096;
    double tail_target = 1e-14;
    std::size_t padding = 0;

    // Default policy with max_dim taken from QWEAK_MAX_DIM when set.
    static DimPolicy from_environment();
};

FockOperator build_identity(std::size_t dim);
FockOperator build_annihilator(DeformationParameter q, std::size_t dim);
FockOperator build_creation(DeformationParameter q, std::size_t dim);
FockOperator build_number(DeformationParameter q, std::size_t dim);  // a^+ a = diag([n]_q)
FockOperator build_q_half_number(DeformationParameter q, std::size_t dim);

struct Quadratures {
    FockOperator x1;  // (a^+ + a)/sqrt2
    FockOperator x2;  // (q^{N/2} a^+ + a q^{N/2})/sqrt2
    FockOperator p;   // i (a^+ - a)/sqrt2
};

Quadratures build_quadratures(DeformationParameter q, std::size_t dim);

// Smallest policy dimension whose tail bound for |z|^2 meets the target,
// together with that bound.
struct TruncationChoice {
    std::size_t dim;
    double tail_bound;
};
TruncationChoice choose_dimension(double abs_z_sq, DeformationParameter q, const DimPolicy& policy);

FockVector coherent_vector(std::complex<double> z, DeformationParameter q, const DimPolicy& policy = {});
FockVector coherent_vector(const CoherentLabel& z, DeformationParameter q, const DimPolicy& policy = {});

// Zero-pads (or rejects shrinking) to a common dimension.
FockVector resized(const FockVector& v, std::size_t dim);

// <v|op|v>. For Hermitian operators the imaginary part is dropped; a
// diagnostic is emitted when it exceeds kHermitianClampThreshold.
inline constexpr double kHermitianClampThreshold = 1e-12;
std::complex<double> expectation(const FockOperator& op, const FockVector& v);

// <u|v>
std::complex<double> inner_product(const FockVector& u, const FockVector& v);

}  // namespace qweak::fock
