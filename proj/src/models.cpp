#include "mesoheat/models.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mesoheat::models {

LinearPDE LinearPDE::make(const Rational& c_tt, const Rational& c_xx, const Rational& c_x4,
                          const Rational& c_xxt) {
    if (!(c_xx > 0)) throw std::invalid_argument("c_xx (diffusivity) must be positive");
    if (c_tt < 0) throw std::invalid_argument("c_tt must be non-negative");
    if (c_x4 < 0) throw std::invalid_argument("c_x4 must be non-negative");
    if (c_xxt < 0) throw std::invalid_argument("c_xxt must be non-negative");
    if (c_x4 != 0 && c_xxt != 0)
        throw std::invalid_argument("c_x4 and c_xxt are alternative corrections; at most one may be nonzero");
    return LinearPDE{c_tt, c_xx, c_x4, c_xxt};
}

LinearPDE LinearPDE::heat(const Rational& D) { return make(0, D, 0, 0); }
LinearPDE LinearPDE::telegraph(const Rational& tau, const Rational& D) {
    return make(tau, D, 0, 0);
}
LinearPDE LinearPDE::fourth_order(const Rational& tau, const Rational& D, const Rational& D2) {
    return make(tau, D, D2, 0);
}
LinearPDE LinearPDE::mixed(const Rational& tau, const Rational& D, const Rational& D1) {
    return make(tau, D, 0, D1);
}

ScaleSpec ScaleSpec::make(const Rational& x_a, const Rational& t_a, const Rational& dx,
                          const Rational& dt, const Rational& L_star, const Rational& T_star,
                          bool allow_noninteger_ratios) {
    using boost::multiprecision::denominator;

    auto positive = [](const Rational& v, const char* name) {
        if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(x_a, "x_a");
    positive(t_a, "t_a");
    positive(dx, "dx");
    positive(dt, "dt");
    positive(L_star, "L_star");
    positive(T_star, "T_star");

    const Rational n1 = dx / x_a;
    const Rational n2 = dt / t_a;
    if (!allow_noninteger_ratios) {
        if (denominator(n1) != 1 || n1 < 1)
            throw std::invalid_argument("dx must be an integer multiple (>= 1) of x_a; got N1 = " +
                                        format_rational(n1));
        if (denominator(n2) != 1 || n2 < 1)
            throw std::invalid_argument("dt must be an integer multiple (>= 1) of t_a; got N2 = " +
                                        format_rational(n2));
    }

    const Rational eps1 = dt / (2 * T_star);
    const Rational eps2 = (dx / L_star) * (dx / L_star);
    if (!(eps1 > 0 && eps1 < 1))
        throw std::invalid_argument("eps1 = dt/(2 T*) must lie in (0,1); got " +
                                    format_rational(eps1));
    if (!(eps2 > 0 && eps2 < 1))
        throw std::invalid_argument("eps2 = (dx/L*)^2 must lie in (0,1); got " +
                                    format_rational(eps2));

    ScaleSpec s;
    s.x_a_ = x_a;
    s.t_a_ = t_a;
    s.dx_ = dx;
    s.dt_ = dt;
    s.L_ = L_star;
    s.T_ = T_star;
    return s;
}

DimensionlessModel dimensionless_params(const ScaleSpec& scales, const Rational& D) {
    if (!(D > 0)) throw std::invalid_argument("diffusivity must be positive");
    DimensionlessModel m;
    m.d_bar = D * scales.T_star() / (scales.L_star() * scales.L_star());
    m.eps1 = scales.dt() / (2 * scales.T_star());
    m.eps2 = (scales.dx() / scales.L_star()) * (scales.dx() / scales.L_star());
    return m;
}

NondimensionalResult nondimensionalize(const LinearPDE& pde, const ScaleSpec& scales) {
    if (pde.c_xxt != 0)
        throw std::invalid_argument("nondimensionalization is defined for the spatial family only");

    const Rational& T = scales.T_star();
    const Rational& L = scales.L_star();
    LinearPDE barred = LinearPDE::make(pde.c_tt / T, pde.c_xx * T / (L * L),
                                       pde.c_x4 * T / (L * L * L * L), 0);
    return NondimensionalResult{dimensionless_params(scales, pde.c_xx), barred};
}

LinearPDE redimensionalize(const LinearPDE& barred, const ScaleSpec& scales) {
    const Rational& T = scales.T_star();
    const Rational& L = scales.L_star();
    return LinearPDE::make(barred.c_tt * T, barred.c_xx * (L * L) / T,
                           barred.c_x4 * (L * L * L * L) / T, barred.c_xxt * (L * L));
}

double predicted_speed(const LinearPDE& pde) {
    if (pde.c_tt == 0)
        throw std::domain_error(
            "c_tt = 0: the parabolic member transmits information at infinite speed, "
            "so no finite propagation speed exists");
    return std::sqrt(to_double(pde.c_xx / pde.c_tt));
}

double predicted_speed(const lattice::MicroParams& micro) {
    return to_double(predicted_speed_exact(micro));
}

Rational predicted_speed_exact(const lattice::MicroParams& micro) {
    return micro.x_a / micro.t_a;
}

DispersionRoots dispersion_roots(const LinearPDE& pde, double k) {
    const double a = to_double(pde.c_tt);
    const double b = 1.0 + to_double(pde.c_xxt) * k * k;
    const double c = to_double(pde.c_xx) * k * k - to_double(pde.c_x4) * k * k * k * k;

    DispersionRoots out;
    if (a == 0.0) {
        out.s.push_back({-c / b, 0.0});
    } else {
        const std::complex<double> disc = std::complex<double>(b * b - 4.0 * a * c, 0.0);
        const std::complex<double> root = std::sqrt(disc);
        out.s.push_back((-b + root) / (2.0 * a));
        out.s.push_back((-b - root) / (2.0 * a));
    }
    for (const auto& s : out.s)
        if (s.real() > 0.0) out.unstable = true;
    return out;
}

double stability_cutoff(const LinearPDE& pde) {
    if (pde.c_x4 == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(to_double(pde.c_xx / pde.c_x4));
}

LinearPDE instantiate(const opcalc::ModifiedPDE& pde, const Rational& dx, const Rational& dt) {
    if (!(dx > 0) || !(dt > 0))
        throw std::invalid_argument("meso scales dx, dt must be positive");

    Rational c_tt = 0, c_xx = 0, c_x4 = 0, c_xxt = 0;
    for (const auto& term : pde.terms) {
        const Rational value =
            term.coeff * rational_pow(dt, term.dt_power) * rational_pow(dx, term.dx_power);
        if (term.t_order == 1 && term.x_order == 0) {
            if (value != 1)
                throw std::invalid_argument("expected a unit U_t coefficient");
        } else if (term.t_order == 2 && term.x_order == 0) {
            c_tt = value;
        } else if (term.t_order == 0 && term.x_order == 2) {
            c_xx = value;
        } else if (term.t_order == 0 && term.x_order == 4) {
            c_x4 = value;
        } else if (term.t_order == 1 && term.x_order == 2) {
            c_xxt = value;
        } else {
            throw std::invalid_argument(
                "only hierarchy levels 0 and 1 instantiate to the solvable family");
        }
    }
    return LinearPDE::make(c_tt, c_xx, c_x4, c_xxt);
}

}  // namespace mesoheat::models
