#pragma once

#include "mesoheat/continuum.hpp"
#include "mesoheat/errors.hpp"
#include "mesoheat/lattice.hpp"
#include "mesoheat/models.hpp"

#include <cstdint>

namespace mesoheat::solvers {

struct SolveOptions {
    Closure closure = Closure::Compatibility;
    GrowthPolicy policy = GrowthPolicy::Reject;
};

struct SpectralSolution {
    ContinuumField u;
    std::optional<ContinuumField> rate;  // present for second-order-in-time members
    bool unstable_modes = false;         // a carried mode grew (policy Allow)
    int cutoff_modes = 0;                // modes zeroed (policy Cutoff)
};

/// Advances every Fourier mode of the initial data exactly in time: single
/// root e^{st} for first-order members, the two-root combination matching
/// (u(0), u_t(0)) otherwise, (A + Bt)e^{st} at a double root. There is no
/// time-stepping error; results are exact up to round-off.
///
/// `duration` is measured from the initial data's own time stamp. For
/// c_tt > 0 the returned rate field allows restarting (semigroup property).
SpectralSolution spectral_solve(const models::LinearPDE& pde, const InitialData& init,
                                double duration, const SolveOptions& opts = {});

/// Closure standing in for the unmeasurable initial rate:
/// u_t(x, 0) = D * u_xx(x, 0), computed spectrally.
ContinuumField compatibility_initial_rate(const models::LinearPDE& pde,
                                          const ContinuumField& u0);

/// Forward-time centered-space heat update on the periodic grid. The mesh
/// ratio r = D*dt/dx^2 must not exceed 1/2; at r = p this reproduces the
/// lattice update bit for bit (it runs the same kernel).
ContinuumField fd_heat_solve(double D, const ContinuumField& u0, double dt,
                             std::int64_t steps);

/// Exact-arithmetic variant on a rational ring field; identical to lattice
/// evolution with hop probability p = r.
lattice::LatticeField<Rational> fd_heat_solve(const Rational& D,
                                              const lattice::LatticeField<Rational>& u0,
                                              const Rational& dx, const Rational& dt,
                                              std::int64_t steps);

}  // namespace mesoheat::solvers
