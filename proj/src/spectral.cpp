#include "mesoheat/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

namespace mesoheat::solvers {

namespace {

using Complex = std::complex<double>;

std::vector<Complex> forward_fft(const ContinuumField& f) {
    std::vector<double> in(static_cast<std::size_t>(f.grid().samples));
    for (int i = 0; i < f.grid().samples; ++i) in[static_cast<std::size_t>(i)] = f.values()[i];
    Eigen::FFT<double> fft;
    std::vector<Complex> out;
    fft.fwd(out, in);
    return out;
}

Eigen::ArrayXd inverse_fft(const std::vector<Complex>& spec) {
    Eigen::FFT<double> fft;
    std::vector<double> out;
    fft.inv(out, spec);
    Eigen::ArrayXd v(static_cast<Eigen::Index>(out.size()));
    for (std::size_t i = 0; i < out.size(); ++i) v[static_cast<Eigen::Index>(i)] = out[i];
    return v;
}

/// Signed wavenumber of DFT bin j on a grid of M samples over length L.
double bin_wavenumber(int j, int m, double length) {
    const int sj = (j <= m / 2) ? j : j - m;
    return 2.0 * std::numbers::pi * static_cast<double>(sj) / length;
}

}  // namespace

ContinuumField compatibility_initial_rate(const models::LinearPDE& pde,
                                          const ContinuumField& u0) {
    const int m = u0.grid().samples;
    const double D = to_double(pde.c_xx);
    std::vector<Complex> spec = forward_fft(u0);
    for (int j = 0; j < m; ++j) {
        const double k = bin_wavenumber(j, m, u0.grid().length);
        spec[static_cast<std::size_t>(j)] *= -D * k * k;
    }
    return ContinuumField(u0.grid(), inverse_fft(spec), u0.time());
}

SpectralSolution spectral_solve(const models::LinearPDE& pde, const InitialData& init,
                                double duration, const SolveOptions& opts) {
    if (duration < 0) throw std::invalid_argument("duration must be non-negative");

    const ContinuumField& u0 = init.u0;
    const Grid grid = u0.grid();
    const int m = grid.samples;
    const bool second_order = pde.c_tt > 0;

    std::vector<Complex> u_hat = forward_fft(u0);
    std::vector<Complex> rate_hat;

    if (second_order) {
        if (init.rate.has_value()) {
            if (!(init.rate->grid() == grid))
                throw std::invalid_argument("initial rate sampled on a different grid");
            rate_hat = forward_fft(*init.rate);
        } else {
            switch (opts.closure) {
                case Closure::Compatibility: {
                    rate_hat = u_hat;
                    const double D = to_double(pde.c_xx);
                    for (int j = 0; j < m; ++j) {
                        const double k = bin_wavenumber(j, m, grid.length);
                        rate_hat[static_cast<std::size_t>(j)] *= -D * k * k;
                    }
                    break;
                }
                case Closure::ZeroRate:
                    rate_hat.assign(static_cast<std::size_t>(m), Complex(0.0, 0.0));
                    break;
                case Closure::None:
                    throw MissingInitialRate(
                        "second-order model without an initial rate and no closure selected");
            }
        }
    }

    // Modes below this fraction of the peak amplitude carry no data; they do
    // not trigger the Reject policy (transform round-off would otherwise).
    double peak = 0.0;
    for (const auto& c : u_hat) peak = std::max(peak, std::abs(c));
    for (const auto& c : rate_hat) peak = std::max(peak, std::abs(c));
    const double carried_tol = 1e-13 * peak;

    const double a = to_double(pde.c_tt);
    SpectralSolution result{ContinuumField(grid, Eigen::ArrayXd::Zero(m), 0.0), std::nullopt,
                            false, 0};

    for (int j = 0; j < m; ++j) {
        const std::size_t ji = static_cast<std::size_t>(j);
        const double k = bin_wavenumber(j, m, grid.length);
        const double kk = k * k;
        const double b = 1.0 + to_double(pde.c_xxt) * kk;
        const double c = to_double(pde.c_xx) * kk - to_double(pde.c_x4) * kk * kk;

        // Positive growth appears exactly when c < 0 (k beyond the cutoff).
        const bool growing = c < 0.0;
        if (growing) {
            const bool carried = std::abs(u_hat[ji]) > carried_tol ||
                                 (second_order && std::abs(rate_hat[ji]) > carried_tol);
            if (opts.policy == GrowthPolicy::Cutoff) {
                u_hat[ji] = 0.0;
                if (second_order) rate_hat[ji] = 0.0;
                ++result.cutoff_modes;
                continue;
            }
            if (!carried) {
                // Nothing but transform round-off here; dropping it avoids
                // 0 * exp(huge) turning into NaN.
                u_hat[ji] = 0.0;
                if (second_order) rate_hat[ji] = 0.0;
                continue;
            }
            if (opts.policy == GrowthPolicy::Reject) {
                std::ostringstream os;
                os << "mode |k| = " << std::abs(k) << " lies beyond the stability cutoff "
                   << models::stability_cutoff(pde) << " and would grow";
                throw IllPosedGrowth(os.str());
            }
            result.unstable_modes = true;
        }

        if (!second_order) {
            const double s = -c / b;
            u_hat[ji] *= std::exp(s * duration);
            continue;
        }

        const double disc = b * b - 4.0 * a * c;
        const Complex root = std::sqrt(Complex(disc, 0.0));
        const Complex s1 = (-b + root) / (2.0 * a);
        const Complex s2 = (-b - root) / (2.0 * a);

        if (std::abs(disc) <= 1e-12 * (b * b + std::abs(4.0 * a * c))) {
            // Double root: (A + B t) e^{st}.
            const Complex s(-b / (2.0 * a), 0.0);
            const Complex A = u_hat[ji];
            const Complex B = rate_hat[ji] - s * A;
            const Complex es = std::exp(s * duration);
            u_hat[ji] = (A + B * duration) * es;
            rate_hat[ji] = (B + s * (A + B * duration)) * es;
        } else {
            const Complex B = (rate_hat[ji] - s1 * u_hat[ji]) / (s2 - s1);
            const Complex A = u_hat[ji] - B;
            const Complex e1 = std::exp(s1 * duration);
            const Complex e2 = std::exp(s2 * duration);
            u_hat[ji] = A * e1 + B * e2;
            rate_hat[ji] = A * s1 * e1 + B * s2 * e2;
        }
    }

    const double t_out = u0.time() + duration;
    result.u = ContinuumField(grid, inverse_fft(u_hat), t_out);
    if (second_order) result.rate = ContinuumField(grid, inverse_fft(rate_hat), t_out);
    return result;
}

ContinuumField fd_heat_solve(double D, const ContinuumField& u0, double dt,
                             std::int64_t steps) {
    if (!(D > 0)) throw std::invalid_argument("diffusivity must be positive");
    if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");

    const double dx = u0.grid().dx();
    const double r = D * dt / (dx * dx);
    if (r > 0.5) {
        std::ostringstream os;
        os << "mesh ratio r = D*dt/dx^2 = " << r << " exceeds the stability bound 1/2";
        throw StabilityViolation(os.str());
    }

    // Same kernel as the lattice update with hop probability p = r; the
    // double -> rational conversion is exact, so this is bit-identical.
    lattice::LatticeField<double>::Vector v(u0.grid().samples);
    for (int i = 0; i < u0.grid().samples; ++i) v[i] = u0.values()[i];
    auto field = lattice::LatticeField<double>::ring(std::move(v));
    field = lattice::evolve(field, lattice::Stencil(rational_from_double(r)), steps);

    Eigen::ArrayXd out(u0.grid().samples);
    for (int i = 0; i < u0.grid().samples; ++i) out[i] = field.values()[i];
    return ContinuumField(u0.grid(), std::move(out),
                          u0.time() + static_cast<double>(steps) * dt);
}

lattice::LatticeField<Rational> fd_heat_solve(const Rational& D,
                                              const lattice::LatticeField<Rational>& u0,
                                              const Rational& dx, const Rational& dt,
                                              std::int64_t steps) {
    if (!(D > 0)) throw std::invalid_argument("diffusivity must be positive");
    if (!(dx > 0) || !(dt > 0)) throw std::invalid_argument("scales must be positive");
    const Rational r = D * dt / (dx * dx);
    if (r > Rational(1, 2)) {
        throw StabilityViolation("mesh ratio r = D*dt/dx^2 = " + format_rational(r) +
                                 " exceeds the stability bound 1/2");
    }
    return lattice::evolve(u0, lattice::Stencil(r), steps);
}

}  // namespace mesoheat::solvers
