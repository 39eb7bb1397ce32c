#include "qweak/coherent_label.hpp"

#include <cmath>

#include "qweak/errors.hpp"

namespace qweak {

CoherentLabel::CoherentLabel(double modulus, double phase) : modulus_(modulus) {
    if (!(modulus >= 0.0) || !std::isfinite(modulus)) throw ConfigError("coherent label modulus must be finite and >= 0");
    if (!std::isfinite(phase)) throw ConfigError("coherent label phase must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phase, two_pi);
    if (p < 0.0) p += two_pi;
    if (p >= two_pi) p = 0.0;
    phase_ = p;
}

CoherentLabel CoherentLabel::from_complex(std::complex<double> value) {
    return CoherentLabel(std::abs(value), std::arg(value));
}

}  // namespace qweak
