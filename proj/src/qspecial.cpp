#include "qweak/qspecial.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qweak/errors.hpp"

namespace qweak {

DeformationParameter::DeformationParameter(double q) : q_(q) {
    if (!(q > 0.0 && q <= 1.0)) {
        std::ostringstream msg;
        msg << "deformation parameter q=" << q << " outside (0, 1]";
        throw DomainError(msg.str());
    }
}

double q_number(std::size_t n, DeformationParameter q) {
    if (q.is_undeformed()) return static_cast<double>(n);
    if (n == 0) return 0.0;
    const double qv = q.value();
    // expm1 keeps full relative precision when q^n is close to 1
    return -std::expm1(static_cast<double>(n) * std::log(qv)) / (1.0 - qv);
}

double q_factorial(std::size_t n, DeformationParameter q) {
    double out = 1.0;
    for (std::size_t k = 1; k <= n; ++k) out *= q_number(k, q);
    return out;
}

double log_q_factorial(std::size_t n, DeformationParameter q) {
    double out = 0.0;
    for (std::size_t k = 2; k <= n; ++k) out += std::log(q_number(k, q));
    return out;
}

cdouble q_pochhammer(cdouble a, DeformationParameter q, std::size_t n) {
    cdouble out = 1.0;
    double qk = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        out *= 1.0 - a * qk;
        qk *= q.value();
    }
    return out;
}

double convergence_radius(DeformationParameter q) {
    if (q.is_undeformed()) return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - q.value());
}

bool in_convergence_domain(double abs_x, DeformationParameter q) {
    if (!std::isfinite(abs_x)) return false;
    if (q.is_undeformed()) return true;
    return abs_x <= kDomainMargin * convergence_radius(q);
}

void require_convergence_domain(double abs_x, DeformationParameter q, const char* what) {
    if (in_convergence_domain(abs_x, q)) return;
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": |x|=" << abs_x << " exceeds " << kDomainMargin
        << " x convergence radius " << convergence_radius(q) << " at q=" << q.value();
    throw DomainError(msg.str());
}

QExpResult q_exp(cdouble x, DeformationParameter q, double tol) {
    if (!(tol > 0.0)) throw ConfigError("q_exp: tolerance must be positive");
    require_convergence_domain(std::abs(x), q, "q_exp");
    if (q.is_undeformed()) return {std::exp(x), 1, 0.0};

    const double ax = std::abs(x);
    cdouble sum = 0.0;
    cdouble term = 1.0;
    for (std::size_t n = 0; n < kMaxSeriesTerms; ++n) {
        sum += term;
        term *= x / q_number(n + 1, q);
        // |t_{k+1}/t_k| = |x|/[k+1]_q decreases in k, so the remainder after
        // t_n is bounded by |t_{n+1}| / (1 - |x|/[n+2]_q).
        const double ratio = ax / q_number(n + 2, q);
        if (ratio < 1.0) {
            const double tail = std::abs(term) / (1.0 - ratio);
            if (tail <= tol * std::abs(sum)) return {sum, n + 1, tail};
        }
    }
    std::ostringstream msg;
    msg << "q_exp: tolerance " << tol << " not met within " << kMaxSeriesTerms
        << " terms (|x|=" << ax << ", q=" << q.value() << ")";
    throw NonConvergence(msg.str());
}

cdouble e_q(cdouble x, DeformationParameter q) { return q_exp(x, q).value; }

}  // namespace qweak
