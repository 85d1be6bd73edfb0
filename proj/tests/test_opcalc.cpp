#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mesoheat/expansion.hpp"
#include "mesoheat/series.hpp"

#include <string>

using namespace mesoheat;
using namespace mesoheat::opcalc;
using lattice::Stencil;

namespace {

// Brute-force oracle: evaluate the residual of the update rule, divided by
// dt, on the monomial U(x,t) = x^K t^J / (K! J!) at (x,t) = (0,0) with
// exact rationals. For a monomial only the (J,K) derivative survives at
// the origin, so the result must equal that term's signed coefficient
// monomial exactly (zero if the expansion has no such term).
Rational monomial_residual(const Rational& p, int J, int K, const Rational& dt,
                           const Rational& dx) {
    Rational num = 0;
    if (K == 0) num += rational_pow(dt, J);  // U(0, dt) term; 0^0 = 1
    if (J == 0) {
        // sum_i w_i (i dx)^K with weights {p, 1-2p, p} on offsets {-1,0,+1}
        Rational s = 0;
        s += p * rational_pow(-dx, K);
        if (K == 0) s += (1 - 2 * p);
        s += p * rational_pow(dx, K);
        num -= s;
    }
    return num / (Rational(factorial(K)) * Rational(factorial(J)) * dt);
}

// Signed residual coefficient predicted by a ModifiedPDE for (J,K) at the
// given scales: LHS terms enter +, RHS terms enter -.
Rational predicted_residual(const ModifiedPDE& pde, int J, int K, const Rational& dt,
                            const Rational& dx) {
    const SeriesTerm* t = pde.find(J, K);
    if (t == nullptr) return 0;
    const Rational value =
        t->coeff * rational_pow(dt, t->dt_power) * rational_pow(dx, t->dx_power);
    return t->x_order == 0 ? value : -value;
}

}  // namespace

TEST_CASE("expansion matches the brute-force monomial oracle") {
    const std::pair<Rational, Rational> scales[] = {
        {Rational(1, 5), Rational(1, 7)},
        {Rational(2, 3), Rational(5, 11)},
    };
    for (const Rational& p : {Rational(1, 3), Rational(1, 2), Rational(1, 7)}) {
        const ModifiedPDE pde = expand_stencil(Stencil{p}, 3, 6);
        for (int J = 0; J <= 3; ++J) {
            for (int K = 0; K <= 6; ++K) {
                if (J > 0 && K > 0) continue;  // the raw expansion has no mixed terms
                for (const auto& [dt, dx] : scales) {
                    CHECK(predicted_residual(pde, J, K, dt, dx) ==
                          monomial_residual(p, J, K, dt, dx));
                }
            }
        }
    }
}

TEST_CASE("frozen expansion coefficients at p = 1/3") {
    const ModifiedPDE pde = expand_stencil(Stencil{}, 2, 4);

    const SeriesTerm* ut = pde.find(1, 0);
    REQUIRE(ut != nullptr);
    CHECK(ut->coeff == 1);
    CHECK(ut->dt_power == 0);
    CHECK(ut->dx_power == 0);

    const SeriesTerm* utt = pde.find(2, 0);
    REQUIRE(utt != nullptr);
    CHECK(utt->coeff == Rational(1, 2));  // (dt/2) U_tt
    CHECK(utt->dt_power == 1);

    const SeriesTerm* uxx = pde.find(0, 2);
    REQUIRE(uxx != nullptr);
    CHECK(uxx->coeff == Rational(1, 3));  // D = dx^2/(3 dt)
    CHECK(uxx->dt_power == -1);
    CHECK(uxx->dx_power == 2);

    // The fourth derivative carries dx^4/(36 dt) = (D/12) dx^2, confirmed by
    // the monomial oracle above; the often-quoted (D/36) dx^2 would be 1/108.
    const SeriesTerm* ux4 = pde.find(0, 4);
    REQUIRE(ux4 != nullptr);
    CHECK(ux4->coeff == Rational(1, 36));
    CHECK(ux4->dt_power == -1);
    CHECK(ux4->dx_power == 4);
    CHECK(ux4->coeff != Rational(1, 108));
}

TEST_CASE("fourth-derivative coefficient for general p") {
    // p dx^4/(12 dt): 1/24 at the endpoint p = 1/2
    const ModifiedPDE half = expand_stencil(Stencil{Rational(1, 2)}, 2, 4);
    CHECK(half.find(0, 4)->coeff == Rational(1, 24));

    const ModifiedPDE gen = expand_stencil(Stencil{Rational(2, 7)}, 2, 4);
    CHECK(gen.find(0, 4)->coeff == Rational(2, 7) / 12);
}

TEST_CASE("expansion input validation") {
    CHECK_THROWS_AS(expand_stencil(Stencil{}, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(expand_stencil(Stencil{}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(expand_stencil(Stencil{}, 1, 5), std::invalid_argument);
    CHECK_NOTHROW(expand_stencil(Stencil{}, 1, 2));
}

TEST_CASE("parity: no odd spatial derivatives ever appear") {
    const ModifiedPDE pde = expand_stencil(Stencil{Rational(2, 5)}, 4, 8);
    for (int k = 1; k <= 8; k += 2)
        for (int j = 0; j <= 4; ++j) CHECK(pde.find(j, k) == nullptr);
}

TEST_CASE("hierarchy levels") {
    SUBCASE("level 0 is the plain diffusion relation") {
        const ModifiedPDE pde = derive_hierarchy(Stencil{}, 0);
        CHECK(pde.level == 0);
        CHECK(pde.terms.size() == 2);
        CHECK(pde.find(1, 0)->coeff == 1);
        CHECK(pde.find(0, 2)->coeff == Rational(1, 3));
    }

    SUBCASE("level 1 keeps U_tt and U_xxxx") {
        const ModifiedPDE pde = derive_hierarchy(Stencil{}, 1);
        CHECK(pde.terms.size() == 4);
        CHECK(pde.find(2, 0)->coeff == Rational(1, 2));
        CHECK(pde.find(0, 4)->coeff == Rational(1, 36));
    }

    SUBCASE("level N reaches d_t^{N+1} and d_x^{2(N+1)} and nothing higher") {
        for (int n = 0; n <= 3; ++n) {
            const ModifiedPDE pde = derive_hierarchy(Stencil{}, n);
            CHECK(pde.find(n + 1, 0) != nullptr);
            CHECK(pde.find(0, 2 * (n + 1)) != nullptr);
            CHECK(pde.find(n + 2, 0) == nullptr);
            CHECK(pde.find(0, 2 * (n + 2)) == nullptr);
        }
        CHECK_THROWS_AS(derive_hierarchy(Stencil{}, -1), std::invalid_argument);
    }

    SUBCASE("each level contains all terms of the previous one") {
        for (int n = 1; n <= 3; ++n) {
            const ModifiedPDE lo = derive_hierarchy(Stencil{}, n - 1);
            const ModifiedPDE hi = derive_hierarchy(Stencil{}, n);
            for (const auto& t : lo.terms) {
                const SeriesTerm* match = hi.find(t.t_order, t.x_order);
                REQUIRE(match != nullptr);
                CHECK(match->coeff == t.coeff);
                CHECK(match->dt_power == t.dt_power);
                CHECK(match->dx_power == t.dx_power);
            }
        }
    }
}

TEST_CASE("dimensional homogeneity is machine-checkable and holds") {
    CHECK(dimensionally_homogeneous(expand_stencil(Stencil{}, 4, 8)));
    for (int n = 0; n <= 3; ++n) CHECK(dimensionally_homogeneous(derive_hierarchy(Stencil{}, n)));
    CHECK(dimensionally_homogeneous(derive_hierarchy(Stencil{}, 1, PdeForm::Mixed)));

    ModifiedPDE broken = derive_hierarchy(Stencil{}, 0);
    broken.terms[0].dt_power += 1;
    CHECK_FALSE(dimensionally_homogeneous(broken));
}

TEST_CASE("mixed-form reduction") {
    const ModifiedPDE spatial = derive_hierarchy(Stencil{}, 1);
    const ModifiedPDE mixed = reduce_to_mixed_form(spatial);

    CHECK(mixed.form == PdeForm::Mixed);
    CHECK(mixed.find(0, 4) == nullptr);
    const SeriesTerm* uxxt = mixed.find(1, 2);
    REQUIRE(uxxt != nullptr);
    CHECK(uxxt->coeff == Rational(1, 12));  // dx^2/12, independent of dt
    CHECK(uxxt->dt_power == 0);
    CHECK(uxxt->dx_power == 2);

    SUBCASE("the substitution is exact for every admissible p") {
        for (const Rational& p : {Rational(1, 2), Rational(2, 7), Rational(1, 5)}) {
            const ModifiedPDE sp = derive_hierarchy(Stencil{p}, 1);
            const ModifiedPDE mx = reduce_to_mixed_form(sp);
            // c * U_xxt with U_xxt = D U_xxxx restores the spatial term:
            // coefficient, dt and dx powers all add back exactly.
            const SeriesTerm* c = mx.find(1, 2);
            const SeriesTerm* d = sp.find(0, 2);
            const SeriesTerm* q4 = sp.find(0, 4);
            REQUIRE(c != nullptr);
            CHECK(c->coeff * d->coeff == q4->coeff);
            CHECK(c->dt_power + d->dt_power == q4->dt_power);
            CHECK(c->dx_power + d->dx_power == q4->dx_power);
        }
    }

    SUBCASE("rejects anything but the level-1 spatial form") {
        CHECK_THROWS_AS(reduce_to_mixed_form(derive_hierarchy(Stencil{}, 0)),
                        std::invalid_argument);
        CHECK_THROWS_AS(reduce_to_mixed_form(derive_hierarchy(Stencil{}, 2)),
                        std::invalid_argument);
        CHECK_THROWS_AS(reduce_to_mixed_form(reduce_to_mixed_form(derive_hierarchy(Stencil{}, 1))),
                        std::invalid_argument);
    }
}

TEST_CASE("coefficient-verification notes") {
    const ModifiedPDE annotated = derive_hierarchy(Stencil{}, 1);
    REQUIRE(annotated.notes.size() == 2);
    CHECK(annotated.notes[0].find("factor of 3") != std::string::npos);
    CHECK(annotated.notes[1].find("length") != std::string::npos);

    CHECK(derive_hierarchy(Stencil{}, 0).notes.empty());
    CHECK(derive_hierarchy(Stencil{Rational(2, 7)}, 1).notes.empty());
    // the annotations survive the mixed-form rewrite
    CHECK(reduce_to_mixed_form(annotated).notes.size() == 2);
}

TEST_CASE("logarithm series coefficients") {
    const OperatorSeries s4 = log_series_coeffs(4);
    CHECK(s4.coeff(0) == 0);
    CHECK(s4.coeff(1) == 1);
    CHECK(s4.coeff(2) == Rational(-1, 2));
    CHECK(s4.coeff(3) == Rational(1, 3));
    CHECK(s4.coeff(4) == Rational(-1, 4));

    CHECK(log_series_coeffs(1).order() == 1);
    CHECK(log_series_coeffs(1).coeff(1) == 1);
    CHECK(log_series_coeffs(6).coeff(6) == Rational(-1, 6));
    CHECK_THROWS_AS(log_series_coeffs(0), std::invalid_argument);
}

TEST_CASE("shift operator series coefficients") {
    const OperatorSeries e3 = shift_series_coeffs(3);
    CHECK(e3.coeff(0) == 1);
    CHECK(e3.coeff(1) == 1);
    CHECK(e3.coeff(2) == Rational(1, 2));
    CHECK(e3.coeff(3) == Rational(1, 6));

    CHECK(shift_series_coeffs(0).coeff(0) == 1);

    // difference operator = shift minus identity: zero constant term
    const OperatorSeries diff = shift_series_coeffs(5).sub(OperatorSeries::one(5));
    CHECK(diff.coeff(0) == 0);
    CHECK(diff.coeff(1) == 1);
}

TEST_CASE("operator identities hold exactly") {
    for (int k = 1; k <= 8; ++k) {
        const OperatorIdentityReport report = operator_identity_check(k);
        CHECK(report.exact());
        CHECK(report.log_of_shift_residual.is_zero());
        CHECK(report.shift_of_log_residual.is_zero());
    }
}

TEST_CASE("series composition requires a zero constant term") {
    CHECK_THROWS_AS(log_series_coeffs(4).compose(shift_series_coeffs(4)),
                    std::invalid_argument);
}

TEST_CASE("rendering") {
    const ModifiedPDE level1 = derive_hierarchy(Stencil{}, 1);
    CHECK(pretty(level1) ==
          "(δt/2)·U_tt + U_t = (δx²/(3δt))·U_xx + "
          "(δx⁴/(36δt))·U_xxxx");
    CHECK(term_value(*level1.find(2, 0)) == "1/2·δt");
    CHECK(term_value(*level1.find(0, 2)) == "1/3·δx²/δt");
    CHECK(derivative_name(*level1.find(0, 4)) == "U_xxxx");

    const ModifiedPDE mixed = reduce_to_mixed_form(level1);
    CHECK(pretty(mixed) ==
          "(δt/2)·U_tt + U_t = (δx²/(3δt))·U_xx + "
          "(δx²/12)·U_xxt");
    CHECK(derivative_name(*mixed.find(1, 2)) == "U_xxt");

    CHECK(pretty(derive_hierarchy(Stencil{}, 0)) ==
          "U_t = (δx²/(3δt))·U_xx");
}
