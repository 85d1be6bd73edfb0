#pragma once

#include "mesoheat/numeric.hpp"

#include <array>

namespace mesoheat::lattice {

/// One-step explicit update rule u_s' = p*u_{s+1} + (1-2p)*u_s + p*u_{s-1}.
///
/// Admissible hop probabilities are 0 < p <= 1/2: the weights are then a
/// convex combination (non-negative, summing to one) and symmetric under
/// s+i <-> s-i. The closed endpoint p = 1/2 is admitted but flagged: its
/// center weight vanishes and the alternating mode survives undamped
/// (g(pi) = -1), so callers may want to warn.
class Stencil {
public:
    Stencil() : Stencil(Rational(1, 3)) {}
    explicit Stencil(const Rational& hop);

    const Rational& p() const noexcept { return p_; }
    double p_as_double() const { return to_double(p_); }

    /// Weights on offsets {-1, 0, +1}: {p, 1-2p, p}.
    std::array<Rational, 3> weights() const;

    /// True exactly at p = 1/2, where g(pi) = -1 (undamped checkerboard).
    bool at_checkerboard_limit() const { return p_ == Rational(1, 2); }

private:
    Rational p_;
};

/// Per-step multiplier of a discrete Fourier mode with phase angle theta:
/// g(theta) = 1 - 2p(1 - cos theta).
double amplification_factor(const Stencil& s, double theta);

/// Cell size and step duration of the discrete model; both strictly positive.
struct MicroParams {
    Rational x_a;
    Rational t_a;
    MicroParams(const Rational& x, const Rational& t);
};

/// Diffusivity carried by the update rule: D = p * x_a^2 / t_a.
Rational diffusion_coefficient(const Stencil& s, const MicroParams& micro);

}  // namespace mesoheat::lattice
