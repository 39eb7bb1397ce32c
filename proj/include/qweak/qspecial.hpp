#pragma once

#include <complex>
#include <cstddef>

namespace qweak {

using cdouble = std::complex<double>;

// The deformation parameter of the Arik-Coon oscillator, 0 < q <= 1.
// q == 1 is the undeformed oscillator and selects exact closed forms
// everywhere; it is only produced by passing exactly 1.0.
class DeformationParameter {
public:
    explicit DeformationParameter(double q);

    static DeformationParameter undeformed() { return DeformationParameter(1.0); }

    double value() const noexcept { return q_; }
    bool is_undeformed() const noexcept { return q_ == 1.0; }

    friend bool operator==(DeformationParameter, DeformationParameter) = default;

private:
    double q_;
};

inline constexpr double kDomainMargin = 0.999;
inline constexpr std::size_t kMaxSeriesTerms = 10000;
inline constexpr double kDefaultSeriesTolerance = 1e-12;

// [n]_q = (1 - q^n) / (1 - q), and n at q = 1.
double q_number(std::size_t n, DeformationParameter q);

// [n]_q! = [1]_q [2]_q ... [n]_q with [0]_q! = 1.
double q_factorial(std::size_t n, DeformationParameter q);

// log([n]_q!), usable long after q_factorial overflows.
double log_q_factorial(std::size_t n, DeformationParameter q);

// (a; q)_n = (1 - a)(1 - a q) ... (1 - a q^{n-1}).
cdouble q_pochhammer(cdouble a, DeformationParameter q, std::size_t n);

// Radius of convergence of e_q: 1/(1-q), +infinity at q = 1.
double convergence_radius(DeformationParameter q);

// True when |x| <= kDomainMargin * convergence_radius(q).
bool in_convergence_domain(double abs_x, DeformationParameter q);

// Throws DomainError naming `what` and the violated radius.
void require_convergence_domain(double abs_x, DeformationParameter q, const char* what);

struct QExpResult {
    cdouble value;
    std::size_t terms_used = 1;
    double tail_bound = 0.0;  // bound on |discarded remainder|
};

// e_q(x) = sum_n x^n / [n]_q!. Summation stops once the geometric bound on
// the remainder drops to tol * |partial sum|.
QExpResult q_exp(cdouble x, DeformationParameter q, double tol = kDefaultSeriesTolerance);

// Convenience: the value of q_exp at default tolerance.
cdouble e_q(cdouble x, DeformationParameter q);

}  // namespace qweak
