#include "qweak/fockspace.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "qweak/diagnostics.hpp"
#include "qweak/errors.hpp"

namespace qweak::fock {
namespace {

void require_dim(std::size_t dim, std::size_t min, const char* what) {
    if (dim < min) {
        std::ostringstream msg;
        msg << what << ": dimension " << dim << " below minimum " << min;
        throw ConfigError(msg.str());
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch " << a << " vs " << b;
        throw DimensionMismatch(msg.str());
    }
}

Eigen::VectorXd q_half_diagonal(DeformationParameter q, std::size_t dim) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(dim));
    const double root = std::sqrt(q.value());
    double v = 1.0;
    for (std::size_t n = 0; n < dim; ++n) {
        d[static_cast<Eigen::Index>(n)] = v;
        v *= root;
    }
    return d;
}

}  // namespace

FockOperator::FockOperator(Matrix entries, bool hermitian) : entries_(std::move(entries)), hermitian_(hermitian) {
    if (entries_.rows() != entries_.cols()) throw DimensionMismatch("FockOperator: matrix must be square");
}

FockOperator FockOperator::adjoint() const { return FockOperator(entries_.adjoint(), hermitian_); }

FockVector FockOperator::apply(const FockVector& v) const {
    require_same_dim(dim(), v.dim(), "FockOperator::apply");
    return FockVector{entries_ * v.coeffs, v.tail_norm, false};
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator*");
    return FockOperator(a.entries_ * b.entries_, false);
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator+");
    return FockOperator(a.entries_ + b.entries_, a.hermitian_ && b.hermitian_);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator-");
    return FockOperator(a.entries_ - b.entries_, a.hermitian_ && b.hermitian_);
}

DimPolicy DimPolicy::from_environment() {
    DimPolicy policy;
    if (const char* env = std::getenv("QWEAK_MAX_DIM")) {
        try {
            const long v = std::stol(env);
            if (v < 2) throw ConfigError("QWEAK_MAX_DIM must be >= 2");
            policy.max_dim = static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw ConfigError(std::string("QWEAK_MAX_DIM is not an integer: ") + env);
        }
    }
    return policy;
}

FockOperator build_identity(std::size_t dim) {
    require_dim(dim, 1, "build_identity");
    const auto n = static_cast<Eigen::Index>(dim);
    return FockOperator(Matrix::Identity(n, n), true);
}

FockOperator build_annihilator(DeformationParameter q, std::size_t dim) {
    require_dim(dim, 2, "build_annihilator");
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(n, n);
    // a|n> = sqrt([n]_q) |n-1>
    for (Eigen::Index k = 1; k < n; ++k) m(k - 1, k) = std::sqrt(q_number(static_cast<std::size_t>(k), q));
    return FockOperator(std::move(m), false);
}

FockOperator build_creation(DeformationParameter q, std::size_t dim) { return build_annihilator(q, dim).adjoint(); }

FockOperator build_number(DeformationParameter q, std::size_t dim) {
    require_dim(dim, 1, "build_number");
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = q_number(static_cast<std::size_t>(k), q);
    return FockOperator(std::move(m), true);
}

FockOperator build_q_half_number(DeformationParameter q, std::size_t dim) {
    require_dim(dim, 1, "build_q_half_number");
    return FockOperator(Matrix(q_half_diagonal(q, dim).cast<std::complex<double>>().asDiagonal()), true);
}

Quadratures build_quadratures(DeformationParameter q, std::size_t dim) {
    require_dim(dim, 2, "build_quadratures");
    const Matrix a = build_annihilator(q, dim).entries();
    const Matrix ad = a.adjoint();
    const Vector half_diag = q_half_diagonal(q, dim).cast<std::complex<double>>();
    const auto half = half_diag.asDiagonal();
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> i(0.0, 1.0);

    Matrix x1 = s * (ad + a);
    Matrix x2 = s * (half * ad + a * half);  // ordering as in the definition of X2
    Matrix p = (i * s) * (ad - a);
    return {FockOperator(std::move(x1), true), FockOperator(std::move(x2), true), FockOperator(std::move(p), true)};
}

TruncationChoice choose_dimension(double abs_z_sq, DeformationParameter q, const DimPolicy& policy) {
    require_dim(policy.start, 1, "DimPolicy.start");
    if (abs_z_sq == 0.0) return {policy.start, 0.0};

    const double log_x = std::log(abs_z_sq);
    const double log_e = std::log(std::abs(q_exp(abs_z_sq, q, 1e-15).value));
    for (std::size_t dim = policy.start; dim <= policy.max_dim; dim *= 2) {
        // term ratio t_{n+1}/t_n = x/[n+1]_q is decreasing, so the tail from
        // index dim is at most t_dim / (1 - x/[dim+1]_q).
        const double ratio = abs_z_sq / q_number(dim + 1, q);
        if (ratio < 1.0) {
            const double log_t = static_cast<double>(dim) * log_x - log_q_factorial(dim, q) - log_e;
            const double bound = std::exp(log_t) / (1.0 - ratio);
            if (bound <= policy.tail_target) return {dim, bound};
        }
        if (dim > policy.max_dim / 2) break;
    }
    std::ostringstream msg;
    msg << "coherent state with |z|^2=" << abs_z_sq << " at q=" << q.value() << " needs more than " << policy.max_dim
        << " basis states for tail " << policy.tail_target;
    throw DimensionOverflow(msg.str());
}

FockVector coherent_vector(std::complex<double> z, DeformationParameter q, const DimPolicy& policy) {
    const double x = std::norm(z);
    require_convergence_domain(x, q, "coherent_vector");
    const auto [dim, tail] = choose_dimension(x, q, policy);

    const double norm = std::sqrt(std::abs(q_exp(x, q, 1e-16).value));
    Vector c = Vector::Zero(static_cast<Eigen::Index>(dim + policy.padding));
    std::complex<double> coeff = 1.0 / norm;
    for (std::size_t n = 0; n < dim; ++n) {
        c[static_cast<Eigen::Index>(n)] = coeff;
        coeff *= z / std::sqrt(q_number(n + 1, q));
    }
    return FockVector{std::move(c), tail, true};
}

FockVector coherent_vector(const CoherentLabel& z, DeformationParameter q, const DimPolicy& policy) {
    return coherent_vector(z.value(), q, policy);
}

FockVector resized(const FockVector& v, std::size_t dim) {
    if (dim < v.dim()) throw DimensionMismatch("resized: cannot shrink a FockVector");
    Vector c = Vector::Zero(static_cast<Eigen::Index>(dim));
    c.head(v.coeffs.size()) = v.coeffs;
    return FockVector{std::move(c), v.tail_norm, v.normalized};
}

std::complex<double> expectation(const FockOperator& op, const FockVector& v) {
    require_same_dim(op.dim(), v.dim(), "expectation");
    const std::complex<double> value = v.coeffs.dot(op.entries() * v.coeffs);  // dot conjugates the left side
    if (!op.is_hermitian()) return value;
    if (std::abs(value.imag()) > kHermitianClampThreshold) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "expectation: Hermitian operator gave imaginary part " << value.imag() << "; clamped";
        emit_diagnostic(msg.str());
    }
    return {value.real(), 0.0};
}

std::complex<double> inner_product(const FockVector& u, const FockVector& v) {
    require_same_dim(u.dim(), v.dim(), "inner_product");
    return u.coeffs.dot(v.coeffs);
}

}  // namespace qweak::fock
