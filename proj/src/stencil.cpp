#include "mesoheat/stencil.hpp"

#include <cmath>
#include <stdexcept>

namespace mesoheat::lattice {

Stencil::Stencil(const Rational& hop) : p_(hop) {
    if (!(p_ > 0 && p_ <= Rational(1, 2)))
        throw std::invalid_argument("hop probability p must satisfy 0 < p <= 1/2, got " +
                                    format_rational(hop));
}

std::array<Rational, 3> Stencil::weights() const {
    return {p_, Rational(1) - 2 * p_, p_};
}

double amplification_factor(const Stencil& s, double theta) {
    return 1.0 - 2.0 * s.p_as_double() * (1.0 - std::cos(theta));
}

MicroParams::MicroParams(const Rational& x, const Rational& t) : x_a(x), t_a(t) {
    if (!(x_a > 0)) throw std::invalid_argument("micro length scale x_a must be positive");
    if (!(t_a > 0)) throw std::invalid_argument("micro time scale t_a must be positive");
}

Rational diffusion_coefficient(const Stencil& s, const MicroParams& micro) {
    return s.p() * micro.x_a * micro.x_a / micro.t_a;
}

}  // namespace mesoheat::lattice
