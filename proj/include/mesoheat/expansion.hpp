#pragma once

#include "mesoheat/numeric.hpp"
#include "mesoheat/stencil.hpp"

#include <string>
#include <vector>

namespace mesoheat::opcalc {

/// One term of a truncated two-scale expansion: coeff * dt^a * dx^b applied
/// to the (t_order, x_order) derivative of U. Homogeneity pins the powers:
/// every term has dimensions temperature/time, i.e. dt_power = t_order - 1
/// and dx_power = x_order. dt_power is -1 on the purely spatial terms
/// because the whole relation is normalized so the U_t coefficient is 1.
struct SeriesTerm {
    int t_order = 0;
    int x_order = 0;
    Rational coeff;
    int dt_power = 0;
    int dx_power = 0;
};

enum class PdeForm { SpatialOnly, Mixed };

/// A truncated evolution equation for the interpolating function U(x, t).
/// Terms with x_order == 0 sit on the left-hand side, the rest on the
/// right, all with positive-side coefficients:
///   sum_lhs coeff*dt^a*dx^b * dU = sum_rhs coeff*dt^a*dx^b * dU.
/// level is the hierarchy index N (>= 0), or -1 for a raw expansion that
/// was truncated at explicit derivative orders rather than by level.
struct ModifiedPDE {
    int level = -1;
    PdeForm form = PdeForm::SpatialOnly;
    std::vector<SeriesTerm> terms;
    std::vector<std::string> notes;  // coefficient-verification annotations

    const SeriesTerm* find(int t_order, int x_order) const;
};

/// Expands U(x, t+dt) = sum_i w_i U(x + i*dx, t) in powers of dt and dx,
/// divided through by dt, keeping time derivatives to t_order and spatial
/// derivatives to x_order. x_order must be even: the rule is parity
/// symmetric, so odd spatial orders vanish identically and asking for them
/// would only mask a bug.
ModifiedPDE expand_stencil(const lattice::Stencil& st, int t_order, int x_order);

/// Level-N member of the hierarchy under the diffusive grading dt ~ dx^2
/// with D = p*dx^2/dt held fixed: time derivatives to order N+1, spatial
/// derivatives to order 2(N+1). Mixed form is defined only at level 1.
ModifiedPDE derive_hierarchy(const lattice::Stencil& st, int level,
                             PdeForm form = PdeForm::SpatialOnly);

/// Rewrites the level-1 spatial form by eliminating U_xxxx through the
/// level-0 relation U_xxt = D * U_xxxx, producing the U_xxt form.
ModifiedPDE reduce_to_mixed_form(const ModifiedPDE& pde);

/// Machine check that every stored term has dimensions temperature/time.
bool dimensionally_homogeneous(const ModifiedPDE& pde);

/// Equation rendering, e.g.
/// "(δt/2)·U_tt + U_t = (δx²/(3δt))·U_xx + (δx⁴/(36δt))·U_xxxx".
std::string pretty(const ModifiedPDE& pde);

/// Coefficient monomial of one term, e.g. "1/2·δt" or "1/3·δx²/δt".
std::string term_value(const SeriesTerm& t);

/// Derivative name of one term, e.g. "U_xxt" for t_order 1, x_order 2.
std::string derivative_name(const SeriesTerm& t);

}  // namespace mesoheat::opcalc
