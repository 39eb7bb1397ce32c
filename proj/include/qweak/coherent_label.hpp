#pragma once

#include <complex>
#include <numbers>

namespace qweak {

// Polar label of a q-coherent state: modulus * exp(i * phase), phase in [0, 2pi).
class CoherentLabel {
public:
    CoherentLabel() = default;
    CoherentLabel(double modulus, double phase);

    static CoherentLabel from_complex(std::complex<double> value);

    double modulus() const noexcept { return modulus_; }
    double phase() const noexcept { return phase_; }
    std::complex<double> value() const { return std::polar(modulus_, phase_); }

private:
    double modulus_ = 0.0;
    double phase_ = 0.0;
};

}  // namespace qweak
