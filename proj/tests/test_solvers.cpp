#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mesoheat/analysis.hpp"
#include "mesoheat/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace mesoheat;
using namespace mesoheat::solvers;
using analysis::compare_fields;
using analysis::Norm;
using lattice::Stencil;
using models::LinearPDE;

namespace {

constexpr double kPi = std::numbers::pi;

ContinuumField sin_field(int m = 64, double length = 2 * kPi) {
    return sine_profile(Grid{length, m}, 1, 1.0);
}

SpectralSolution solve(const LinearPDE& pde, const ContinuumField& u0, double t,
                       Closure closure = Closure::Compatibility,
                       GrowthPolicy policy = GrowthPolicy::Reject) {
    SolveOptions opts;
    opts.closure = closure;
    opts.policy = policy;
    return spectral_solve(pde, InitialData{u0, std::nullopt}, t, opts);
}

}  // namespace

TEST_CASE("grid and field validation") {
    CHECK_THROWS_AS(ContinuumField(Grid{1.0, 3}, Eigen::ArrayXd::Zero(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ContinuumField(Grid{1.0, 6}, Eigen::ArrayXd::Zero(4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ContinuumField(Grid{-1.0, 4}, Eigen::ArrayXd::Zero(4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ContinuumField(Grid{1.0, 5}, Eigen::ArrayXd::Zero(5)),
                    std::invalid_argument);
}

TEST_CASE("profiles") {
    const Grid grid{10.0, 128};
    const ContinuumField g = gaussian_profile(grid, 5.0, 0.4, 2.0);
    double mass = 0.0;
    for (int i = 0; i < grid.samples; ++i) mass += g.values()[i] * grid.dx();
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-10));

    const ContinuumField s = sin_field();
    CHECK(s.values()[16] == doctest::Approx(1.0));

    const ContinuumField d = spike_profile(grid, 5.0, 1.0);
    double spike_mass = 0.0;
    int nonzero = 0;
    for (int i = 0; i < grid.samples; ++i) {
        spike_mass += d.values()[i] * grid.dx();
        if (d.values()[i] != 0.0) ++nonzero;
    }
    CHECK(nonzero == 1);
    CHECK(spike_mass == doctest::Approx(1.0));
}

TEST_CASE("compatibility initial rate") {
    const ContinuumField s = sin_field();
    const ContinuumField rate = compatibility_initial_rate(LinearPDE::heat(1), s);
    for (int i = 0; i < 64; ++i)
        CHECK(rate.values()[i] == doctest::Approx(-s.values()[i]).epsilon(1e-12));

    const ContinuumField c(Grid{2 * kPi, 16}, Eigen::ArrayXd::Constant(16, 3.5));
    const ContinuumField zero_rate = compatibility_initial_rate(LinearPDE::heat(1), c);
    CHECK(zero_rate.max_abs() <= 1e-13);
}

TEST_CASE("spectral heat: exact mode decay") {
    const ContinuumField s = sin_field();
    const auto sol = solve(LinearPDE::heat(1), s, 1.0);
    const double amp = std::exp(-1.0);
    for (int i = 0; i < 64; ++i)
        CHECK(std::abs(sol.u.values()[i] - amp * s.values()[i]) <= 1e-12);
    CHECK_FALSE(sol.rate.has_value());
}

TEST_CASE("constant data is a fixed point of every member") {
    const ContinuumField c(Grid{2 * kPi, 32}, Eigen::ArrayXd::Constant(32, 2.5));
    for (const LinearPDE& pde :
         {LinearPDE::heat(1), LinearPDE::telegraph(1, 1),
          LinearPDE::fourth_order(1, 1, Rational(1, 100)), LinearPDE::mixed(1, 1, 1)}) {
        const auto sol = solve(pde, c, 3.0, Closure::Compatibility, GrowthPolicy::Cutoff);
        for (int i = 0; i < 32; ++i)
            CHECK(sol.u.values()[i] == doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("telegraph critical damping takes the double-root branch") {
    // tau = 1, D = 1: the discriminant 1 - 4 tau D k^2 vanishes at k = 1/2,
    // reachable as the first mode of a 4*pi domain. With the compatibility
    // rate -D k^2 u0 the mode evolves as (1 + t/4) e^{-t/2} u0.
    const Grid grid{4 * kPi, 64};
    const ContinuumField u0 = sine_profile(grid, 1, 1.0);
    const double t = 2.0;
    const auto sol = solve(LinearPDE::telegraph(1, 1), u0, t);
    const double factor = (1.0 + t / 4.0) * std::exp(-t / 2.0);
    for (int i = 0; i < grid.samples; ++i)
        CHECK(std::abs(sol.u.values()[i] - factor * u0.values()[i]) <= 1e-12);
    CHECK(sol.rate.has_value());
}

TEST_CASE("mean is conserved by every member") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    Eigen::ArrayXd v(64);
    for (int i = 0; i < 64; ++i) v[i] = val(rng);
    const ContinuumField u0(Grid{3.0, 64}, v);
    const double mean0 = u0.mean();

    for (const LinearPDE& pde :
         {LinearPDE::heat(2), LinearPDE::telegraph(Rational(1, 2), 1),
          LinearPDE::fourth_order(1, 1, Rational(1, 1000)), LinearPDE::mixed(1, 1, 1)}) {
        for (Closure closure : {Closure::Compatibility, Closure::ZeroRate}) {
            const auto sol = solve(pde, u0, 0.7, closure, GrowthPolicy::Cutoff);
            CHECK(sol.u.mean() == doctest::Approx(mean0).epsilon(1e-12));
        }
    }
}

TEST_CASE("semigroup: advancing twice equals advancing once") {
    const Grid grid{20.0, 256};
    const ContinuumField u0 = gaussian_profile(grid, 10.0, 0.8, 1.0);

    SUBCASE("heat") {
        const auto once = solve(LinearPDE::heat(1), u0, 0.7);
        const auto first = solve(LinearPDE::heat(1), u0, 0.3);
        const auto second = solve(LinearPDE::heat(1), first.u, 0.4);
        const double scale = once.u.max_abs();
        CHECK(compare_fields(once.u, second.u, Norm::LInf) <= 1e-10 * scale);
        CHECK(second.u.time() == doctest::Approx(0.7));
    }

    SUBCASE("telegraph restarts from the propagated rate") {
        const LinearPDE pde = LinearPDE::telegraph(1, 1);
        const auto once = solve(pde, u0, 0.7);
        const auto first = solve(pde, u0, 0.3);
        REQUIRE(first.rate.has_value());
        const auto second =
            spectral_solve(pde, InitialData{first.u, first.rate}, 0.4, SolveOptions{});
        const double scale = once.u.max_abs();
        CHECK(compare_fields(once.u, second.u, Norm::LInf) <= 1e-10 * scale);
    }
}

TEST_CASE("heat solutions from non-negative data stay non-negative") {
    const double eps = std::numeric_limits<double>::epsilon();

    SUBCASE("single-cell spike") {
        const Grid grid{10.0, 256};
        const ContinuumField u0 = spike_profile(grid, 5.0, 1.0);
        for (double t : {0.01, 0.1, 1.0}) {
            const auto sol = solve(LinearPDE::heat(1), u0, t);
            const double floor = -10.0 * eps * u0.max_abs();
            for (int i = 0; i < grid.samples; ++i) CHECK(sol.u.values()[i] >= floor);
        }
    }

    SUBCASE("random non-negative data") {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> val(0.0, 1.0);
        const Grid grid{2 * kPi, 64};
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::ArrayXd v(grid.samples);
            for (int i = 0; i < grid.samples; ++i) v[i] = val(rng);
            const ContinuumField u0(grid, v);
            const auto sol = solve(LinearPDE::heat(1), u0, 0.5);
            const double floor = -10.0 * eps * u0.max_abs();
            for (int i = 0; i < grid.samples; ++i) CHECK(sol.u.values()[i] >= floor);
        }
    }
}

TEST_CASE("telegraph converges to heat as the relaxation time vanishes") {
    const Grid grid{20.0, 256};
    const ContinuumField u0 = gaussian_profile(grid, 10.0, 0.6, 1.0);
    const auto heat = solve(LinearPDE::heat(1), u0, 0.5);

    double previous = std::numeric_limits<double>::infinity();
    for (const Rational& tau : {Rational(1, 10), Rational(1, 100), Rational(1, 1000)}) {
        const auto tel = solve(LinearPDE::telegraph(tau, 1), u0, 0.5);
        const double diff = compare_fields(heat.u, tel.u, Norm::LInf);
        CHECK(diff < previous);
        previous = diff;
    }
}

TEST_CASE("compatibility closure matches heat to second order in time") {
    // With u_t(0) = D u_xx(0) the telegraph solution departs from heat like
    // t^2; with a zero rate it departs like t.
    const Grid grid{20.0, 256};
    const ContinuumField u0 = gaussian_profile(grid, 10.0, 0.8, 1.0);
    const LinearPDE tel = LinearPDE::telegraph(1, 1);

    auto departure = [&](Closure closure, double t) {
        const auto h = solve(LinearPDE::heat(1), u0, t);
        const auto g = solve(tel, u0, t, closure);
        return compare_fields(h.u, g.u, Norm::LInf);
    };

    const double compat_ratio = departure(Closure::Compatibility, 0.04) /
                                departure(Closure::Compatibility, 0.02);
    const double zero_ratio = departure(Closure::ZeroRate, 0.04) /
                              departure(Closure::ZeroRate, 0.02);
    CHECK(compat_ratio > 3.4);   // ~4 for an O(t^2) departure
    CHECK(compat_ratio < 4.6);
    CHECK(zero_ratio > 1.6);     // ~2 for an O(t) departure
    CHECK(zero_ratio < 2.4);
}

TEST_CASE("missing initial rate is an error only without a closure") {
    const ContinuumField s = sin_field();
    CHECK_THROWS_AS(solve(LinearPDE::telegraph(1, 1), s, 0.5, Closure::None),
                    MissingInitialRate);
    CHECK_NOTHROW(solve(LinearPDE::telegraph(1, 1), s, 0.5, Closure::ZeroRate));
    // first-order members never need a rate
    CHECK_NOTHROW(solve(LinearPDE::heat(1), s, 0.5, Closure::None));
}

TEST_CASE("growth policies for the ill-posed regime") {
    // k = 20 lies beyond the cutoff sqrt(c_xx/c_x4) = 10.
    const Grid grid{2 * kPi, 64};
    const ContinuumField u0 = sine_profile(grid, 20, 1.0);
    const LinearPDE pde = LinearPDE::fourth_order(0, 1, Rational(1, 100));

    CHECK_THROWS_AS(solve(pde, u0, 0.1, Closure::Compatibility, GrowthPolicy::Reject),
                    IllPosedGrowth);

    const auto cut = solve(pde, u0, 0.1, Closure::Compatibility, GrowthPolicy::Cutoff);
    CHECK(cut.cutoff_modes > 0);
    CHECK(cut.u.max_abs() <= 1e-10);  // the only carried mode was zeroed

    const auto allow = solve(pde, u0, 0.1, Closure::Compatibility, GrowthPolicy::Allow);
    CHECK(allow.unstable_modes);
    CHECK(allow.u.max_abs() > u0.max_abs());  // deliberate blow-up regime

    // modes below the cutoff pass through Reject untouched
    const ContinuumField low = sine_profile(grid, 3, 1.0);
    CHECK_NOTHROW(solve(pde, low, 0.1, Closure::Compatibility, GrowthPolicy::Reject));
}

TEST_CASE("explicit heat stepping") {
    SUBCASE("stability bound") {
        const Grid grid{1.0, 16};
        const ContinuumField u0 = gaussian_profile(grid, 0.5, 0.1, 1.0);
        // r = D dt/dx^2 = 0.6 > 1/2
        const double dx = grid.dx();
        CHECK_THROWS_AS(fd_heat_solve(1.0, u0, 0.6 * dx * dx, 10), StabilityViolation);
        CHECK_NOTHROW(fd_heat_solve(1.0, u0, 0.5 * dx * dx, 10));
    }

    SUBCASE("exact equality with the lattice at r = p") {
        // rational: delta on a 9-ring, r = 1/3
        lattice::LatticeField<Rational>::Vector v(9);
        for (int i = 0; i < 9; ++i) v[i] = Rational(i == 4 ? 1 : 0);
        const auto ring = lattice::LatticeField<Rational>::ring(v);
        const auto fd = fd_heat_solve(Rational(1), ring, Rational(1), Rational(1, 3), 2);
        const auto lat = lattice::evolve(ring, Stencil{}, 2);
        for (int s = 0; s < 9; ++s) CHECK(fd.value_at(s) == lat.value_at(s));
        CHECK(fd.value_at(2) == Rational(1, 9));
        CHECK(fd.value_at(3) == Rational(2, 9));
        CHECK(fd.value_at(4) == Rational(3, 9));

        // float path is bit-identical with the same mesh ratio
        const Grid grid{9.0, 10};
        Eigen::ArrayXd w(10);
        for (int i = 0; i < 10; ++i) w[i] = (i == 5) ? 1.0 : 0.0;
        const ContinuumField u0(grid, w);
        const double dx = grid.dx();
        const ContinuumField fd_f = fd_heat_solve(1.0, u0, dx * dx / 3.0, 4);
        lattice::LatticeField<double>::Vector lv(10);
        for (int i = 0; i < 10; ++i) lv[i] = w[i];
        const auto lat_f = lattice::evolve(
            lattice::LatticeField<double>::ring(std::move(lv)),
            Stencil{rational_from_double(1.0 * (dx * dx / 3.0) / (dx * dx))}, 4);
        for (int i = 0; i < 10; ++i) CHECK(fd_f.values()[i] == lat_f.value_at(i));

        // rejects an unstable rational ratio
        CHECK_THROWS_AS(fd_heat_solve(Rational(1), ring, Rational(1), Rational(3, 5), 1),
                        StabilityViolation);
    }

    SUBCASE("second-order convergence to the spectral solution") {
        const double t_final = 0.5;
        double previous_error = 0.0;
        for (int m : {16, 32, 64}) {
            const Grid grid{2 * kPi, m};
            const ContinuumField u0 = sine_profile(grid, 1, 1.0);
            const double dx = grid.dx();
            const double dt = 0.4 * dx * dx;  // fixed mesh ratio r = 0.4
            const auto steps = static_cast<std::int64_t>(std::llround(t_final / dt));
            const ContinuumField fd = fd_heat_solve(1.0, u0, dt, steps);
            const auto exact = solve(LinearPDE::heat(1), u0, static_cast<double>(steps) * dt);
            const double err = compare_fields(fd, exact.u, Norm::LInf);
            if (previous_error > 0.0) {
                const double ratio = previous_error / err;
                CHECK(ratio > 3.4);
                CHECK(ratio < 4.6);
            }
            previous_error = err;
        }
    }
}

TEST_CASE("solver argument validation") {
    const ContinuumField s = sin_field();
    CHECK_THROWS_AS(solve(LinearPDE::heat(1), s, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(fd_heat_solve(-1.0, s, 0.01, 1), std::invalid_argument);

    // initial rate on a mismatched grid
    const ContinuumField other(Grid{2 * kPi, 32}, Eigen::ArrayXd::Zero(32));
    CHECK_THROWS_AS(
        spectral_solve(LinearPDE::telegraph(1, 1), InitialData{s, other}, 0.1, SolveOptions{}),
        std::invalid_argument);
}
