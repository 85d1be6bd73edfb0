#pragma once

#include "mesoheat/expansion.hpp"
#include "mesoheat/numeric.hpp"
#include "mesoheat/stencil.hpp"

#include <complex>
#include <vector>

namespace mesoheat::models {

/// Constant-coefficient family
///   c_tt*U_tt + U_t = c_xx*U_xx + c_x4*U_xxxx + c_xxt*U_xxt
/// with the U_t coefficient fixed at one. c_xx > 0; the others are >= 0 and
/// at most one of c_x4, c_xxt may be nonzero (the fourth-order and mixed
/// corrections are alternative closures, not combined ones).
struct LinearPDE {
    Rational c_tt;   // tau: relaxation time
    Rational c_xx;   // D: diffusivity
    Rational c_x4;   // D2: fourth-order correction
    Rational c_xxt;  // D1: mixed correction

    static LinearPDE heat(const Rational& D);
    static LinearPDE telegraph(const Rational& tau, const Rational& D);
    static LinearPDE fourth_order(const Rational& tau, const Rational& D, const Rational& D2);
    static LinearPDE mixed(const Rational& tau, const Rational& D, const Rational& D1);
    static LinearPDE make(const Rational& c_tt, const Rational& c_xx, const Rational& c_x4,
                          const Rational& c_xxt);
};

/// Micro (x_a, t_a), meso (dx, dt) and macro (L*, T*) scales. The meso
/// scales must be integer multiples of the micro scales (dx = N1*x_a,
/// dt = N2*t_a with N1, N2 >= 1) unless explicitly overridden for
/// exploratory use; epsilon_1 = dt/(2 T*) and epsilon_2 = (dx/L*)^2 must
/// both lie in (0, 1).
class ScaleSpec {
public:
    static ScaleSpec make(const Rational& x_a, const Rational& t_a, const Rational& dx,
                          const Rational& dt, const Rational& L_star, const Rational& T_star,
                          bool allow_noninteger_ratios = false);

    const Rational& x_a() const noexcept { return x_a_; }
    const Rational& t_a() const noexcept { return t_a_; }
    const Rational& dx() const noexcept { return dx_; }
    const Rational& dt() const noexcept { return dt_; }
    const Rational& L_star() const noexcept { return L_; }
    const Rational& T_star() const noexcept { return T_; }

    Rational n1() const { return dx_ / x_a_; }
    Rational n2() const { return dt_ / t_a_; }

private:
    ScaleSpec() = default;
    Rational x_a_, t_a_, dx_, dt_, L_, T_;
};

struct DimensionlessModel {
    Rational d_bar;  // D T* / L*^2
    Rational eps1;   // (1/2) dt / T*
    Rational eps2;   // (dx / L*)^2
};

DimensionlessModel dimensionless_params(const ScaleSpec& scales, const Rational& D);

struct NondimensionalResult {
    DimensionlessModel params;
    LinearPDE barred;  // same family in t/T*, x/L* variables
};

/// Rescales t = T* tbar, x = L* xbar; exact on the rational coefficients,
/// and redimensionalize() inverts it exactly. Mixed-form inputs are
/// rejected: only the spatial family is rescaled here.
NondimensionalResult nondimensionalize(const LinearPDE& pde, const ScaleSpec& scales);
LinearPDE redimensionalize(const LinearPDE& barred, const ScaleSpec& scales);

/// sqrt(c_xx/c_tt) for relaxing models. Throws std::domain_error for
/// c_tt = 0: the purely parabolic member propagates information at
/// unbounded speed, so no finite value exists.
double predicted_speed(const LinearPDE& pde);

/// Information speed of the discrete model: x_a / t_a.
double predicted_speed(const lattice::MicroParams& micro);
Rational predicted_speed_exact(const lattice::MicroParams& micro);

/// Growth rates of the Fourier mode e^{ikx+st}: roots of
///   c_tt s^2 + (1 + c_xxt k^2) s + (c_xx k^2 - c_x4 k^4) = 0,
/// one root when c_tt = 0. unstable is set when any root has positive
/// real part (k^2 > c_xx/c_x4 territory for the fourth-order member).
struct DispersionRoots {
    std::vector<std::complex<double>> s;
    bool unstable = false;
};

DispersionRoots dispersion_roots(const LinearPDE& pde, double k);

/// Wavenumber above which the fourth-order member grows: sqrt(c_xx/c_x4);
/// infinity when c_x4 = 0.
double stability_cutoff(const LinearPDE& pde);

/// Numeric instantiation of a symbolic hierarchy member at meso scales
/// (dx, dt). Defined for levels 0 and 1 (and the mixed level-1 form),
/// which is exactly the LinearPDE family.
LinearPDE instantiate(const opcalc::ModifiedPDE& pde, const Rational& dx, const Rational& dt);

}  // namespace mesoheat::models
