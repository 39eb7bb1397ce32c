#include <cmath>
#include <complex>

#include "doctest.h"
#include "qweak/errors.hpp"
#include "qweak/qspecial.hpp"

using namespace qweak;

namespace {
DeformationParameter Q(double q) { return DeformationParameter(q); }
}

TEST_CASE("deformation parameter range") {
    CHECK_THROWS_AS(Q(0.0), DomainError);
    CHECK_THROWS_AS(Q(-0.2), DomainError);
    CHECK_THROWS_AS(Q(1.0000001), DomainError);
    CHECK_THROWS_AS(Q(std::nan("")), DomainError);
    CHECK(Q(1.0).is_undeformed());
    CHECK_FALSE(Q(0.999999999).is_undeformed());
}

TEST_CASE("q numbers") {
    CHECK(q_number(0, Q(0.5)) == 0.0);
    CHECK(q_number(3, Q(0.5)) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(q_number(5, Q(1.0)) == 5.0);
    for (double q : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
        double prev = -1.0;
        for (std::size_t n = 0; n <= 50; ++n) {
            const double next = q_number(n + 1, Q(q));
            CHECK(next == doctest::Approx(1.0 + q * q_number(n, Q(q))).epsilon(1e-14));
            // saturates to 1/(1-q) in double precision for small q
            if (n <= 12) CHECK(q_number(n, Q(q)) > prev);
            CHECK(q_number(n, Q(q)) >= prev);
            prev = q_number(n, Q(q));
        }
    }
}

TEST_CASE("q factorials") {
    CHECK(q_factorial(0, Q(0.3)) == 1.0);
    CHECK(q_factorial(3, Q(0.5)) == doctest::Approx(2.625).epsilon(1e-15));
    CHECK(q_factorial(4, Q(1.0)) == 24.0);
    for (double q : {0.2, 0.7, 1.0}) {
        for (std::size_t n = 1; n < 40; ++n) {
            CHECK(q_factorial(n, Q(q)) == q_factorial(n - 1, Q(q)) * q_number(n, Q(q)));
            CHECK(log_q_factorial(n, Q(q)) == doctest::Approx(std::log(q_factorial(n, Q(q)))).epsilon(1e-12));
        }
    }
    // large n stays finite on the log scale
    CHECK(std::isfinite(log_q_factorial(5000, Q(1.0))));
    CHECK(log_q_factorial(5000, Q(1.0)) == doctest::Approx(std::lgamma(5001.0)).epsilon(1e-12));
}

TEST_CASE("q pochhammer") {
    CHECK(q_pochhammer(cdouble(3.7, -1.0), Q(0.5), 0) == cdouble(1.0));
    CHECK(std::abs(q_pochhammer(1.0, Q(0.5), 3)) == 0.0);
    CHECK(q_pochhammer(0.5, Q(0.5), 2).real() == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("convergence radius and domain") {
    CHECK(convergence_radius(Q(0.5)) == doctest::Approx(2.0));
    CHECK(convergence_radius(Q(0.9)) == doctest::Approx(10.0));
    CHECK(std::isinf(convergence_radius(Q(1.0))));
    CHECK(in_convergence_domain(1.99, Q(0.5)));
    CHECK_FALSE(in_convergence_domain(1.9999, Q(0.5)));
    CHECK_THROWS_AS(q_exp(2.5, Q(0.5)), DomainError);
    CHECK_THROWS_AS(q_exp(cdouble(0.0, 1.999), Q(0.5)), DomainError);
    CHECK_THROWS_AS(q_exp(0.5, Q(0.5), 0.0), ConfigError);
}

TEST_CASE("q exponential values") {
    CHECK(q_exp(0.0, Q(0.4)).value == cdouble(1.0));
    CHECK(q_exp(1.0, Q(1.0)).value.real() == doctest::Approx(2.718281828459045).epsilon(1e-15));

    // direct partial summation at q = 0.5
    cdouble sum = 0.0;
    double term = 1.0;
    for (std::size_t n = 0; n < 200; ++n) {
        sum += term;
        term /= q_number(n + 1, Q(0.5));
    }
    const auto r = q_exp(1.0, Q(0.5));
    CHECK(std::abs(r.value - sum) <= 1e-12 * std::abs(sum));
    CHECK(r.terms_used >= 1);
    CHECK(r.tail_bound <= 1e-12 * std::abs(r.value));
}

TEST_CASE("q exponential product form") {
    // e_q(x) = 1 / ((1-q)x; q)_inf
    for (double q : {0.1, 0.35, 0.6, 0.85, 0.95}) {
        for (double frac : {0.05, 0.3, 0.6, 0.9}) {
            const cdouble x = std::polar(frac * convergence_radius(Q(q)), 0.7);
            const cdouble product = q_pochhammer((1.0 - q) * x, Q(q), 4000);
            const cdouble e = q_exp(x, Q(q)).value;
            CHECK(std::abs(e * product - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("q exponential two series forms agree") {
    for (double q : {0.1, 0.5, 0.9}) {
        const cdouble x(0.4 * convergence_radius(Q(q)), 0.2);
        cdouble alt = 0.0;
        cdouble power = 1.0;
        for (std::size_t n = 0; n < 3000; ++n) {
            alt += power / q_pochhammer(q, Q(q), n);
            power *= (1.0 - q) * x;
        }
        const cdouble e = q_exp(x, Q(q)).value;
        CHECK(std::abs(e - alt) <= 1e-12 * std::abs(e));
    }
}

TEST_CASE("q exponential reduces to exp and commutes with conjugation") {
    for (double x = -20.0; x <= 20.0; x += 2.5) {
        const double expected = std::exp(x);
        CHECK(std::abs(q_exp(x, Q(1.0)).value.real() - expected) <= 1e-12 * expected);
    }
    for (double q : {0.3, 0.8, 1.0}) {
        const cdouble x(0.9, -0.6);
        CHECK(std::abs(q_exp(std::conj(x), Q(q)).value - std::conj(q_exp(x, Q(q)).value)) <= 1e-14);
    }
}

TEST_CASE("q exponential near the radius converges or reports") {
    const auto r = q_exp(0.99 * convergence_radius(Q(0.9)), Q(0.9));
    CHECK(std::isfinite(r.value.real()));
    CHECK(r.tail_bound <= 1e-12 * std::abs(r.value));
    // inside the margin but too slow for the term cap
    CHECK_THROWS_AS(q_exp(0.9985 * convergence_radius(Q(0.9)), Q(0.9)), NonConvergence);
}
