#include "mesoheat/analysis.hpp"

#include "mesoheat/threads.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <semaphore>
#include <sstream>
#include <stdexcept>

namespace mesoheat::analysis {

using solvers::ContinuumField;
using solvers::Grid;

double compare_fields(const ContinuumField& a, const ContinuumField& b, Norm norm) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("fields are sampled on different grids");
    const int m = a.grid().samples;
    if (norm == Norm::LInf) {
        double worst = 0.0;
        for (int i = 0; i < m; ++i)
            worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
        return worst;
    }
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double d = a.values()[i] - b.values()[i];
        sum += d * d;
    }
    return std::sqrt(sum * a.grid().dx());
}

std::optional<NegativitySample> negativity_scan(const std::vector<ContinuumField>& history,
                                                double tol) {
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    for (const auto& f : history)
        for (int i = 0; i < f.grid().samples; ++i)
            if (f.values()[i] < -tol)
                return NegativitySample{f.time(), f.grid().x(i), f.values()[i]};
    return std::nullopt;
}

std::optional<LatticeNegativity> negativity_scan(
    const std::vector<lattice::LatticeField<Rational>>& history) {
    for (const auto& f : history)
        for (std::int64_t i = 0; i < f.size(); ++i) {
            const Rational& v = f.values()[static_cast<Eigen::Index>(i)];
            if (v < 0) return LatticeNegativity{f.step_index(), f.origin() + i, v};
        }
    return std::nullopt;
}

bool parity_check(const std::function<ContinuumField(const ContinuumField&)>& evolve,
                  const ContinuumField& u0, double tol) {
    const ContinuumField lhs = mirror(evolve(u0));
    const ContinuumField rhs = evolve(mirror(u0));
    return compare_fields(lhs, rhs, Norm::LInf) <= tol;
}

namespace {

template <class Scalar>
bool lattice_fields_match(const lattice::LatticeField<Scalar>& a,
                          const lattice::LatticeField<Scalar>& b, double tol) {
    const std::int64_t lo = std::min(a.topology() == lattice::Topology::Line ? a.origin() : 0,
                                     b.topology() == lattice::Topology::Line ? b.origin() : 0);
    const std::int64_t hi =
        std::max(a.topology() == lattice::Topology::Line ? a.origin() + a.size() : a.size(),
                 b.topology() == lattice::Topology::Line ? b.origin() + b.size() : b.size());
    for (std::int64_t s = lo; s < hi; ++s) {
        if constexpr (std::is_same_v<Scalar, Rational>) {
            (void)tol;
            if (a.value_at(s) != b.value_at(s)) return false;
        } else {
            if (std::abs(a.value_at(s) - b.value_at(s)) > tol) return false;
        }
    }
    return true;
}

}  // namespace

bool parity_check(
    const std::function<lattice::LatticeField<double>(const lattice::LatticeField<double>&)>&
        evolve,
    const lattice::LatticeField<double>& u0, double tol) {
    return lattice_fields_match(mirror(evolve(u0)), evolve(mirror(u0)), tol);
}

bool parity_check(
    const std::function<lattice::LatticeField<Rational>(const lattice::LatticeField<Rational>&)>&
        evolve,
    const lattice::LatticeField<Rational>& u0) {
    return lattice_fields_match(mirror(evolve(u0)), evolve(mirror(u0)), 0.0);
}

bool SpeedEstimate::front_non_decreasing() const {
    for (std::size_t i = 1; i < front.size(); ++i)
        if (front[i].second < front[i - 1].second) return false;
    return true;
}

namespace {

double fit_slope(const std::vector<std::pair<double, double>>& points) {
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("degenerate least-squares fit");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace

SpeedEstimate front_speed(const std::vector<ContinuumField>& history, double threshold,
                          double center, std::optional<double> predicted) {
    if (!(threshold >= 0)) throw std::invalid_argument("threshold must be non-negative");
    SpeedEstimate est;
    est.threshold = threshold;
    est.predicted = predicted;

    for (const auto& f : history) {
        const double L = f.grid().length;
        double farthest = -1.0;
        for (int i = 0; i < f.grid().samples; ++i) {
            if (std::abs(f.values()[i]) > threshold) {
                double d = std::abs(f.grid().x(i) - center);
                d = std::min(d, L - d);  // periodic distance
                farthest = std::max(farthest, d);
            }
        }
        if (farthest >= 0.0) est.front.emplace_back(f.time(), farthest);
    }

    if (est.front.size() < 2)
        throw FrontNotDetected("threshold " + std::to_string(threshold) +
                               " was crossed in fewer than two snapshots");

    est.fitted_speed = fit_slope(est.front);
    if (predicted.has_value() && *predicted != 0.0)
        est.relative_deviation = std::abs(est.fitted_speed - *predicted) / std::abs(*predicted);
    return est;
}

LatticeSpeedEstimate lattice_front_speed(const lattice::Stencil& st,
                                         const lattice::LatticeField<Rational>& u0,
                                         std::int64_t steps,
                                         const lattice::MicroParams& micro) {
    if (u0.topology() != lattice::Topology::Line)
        throw std::invalid_argument("support-based speed needs the line topology");
    if (steps < 1) throw std::invalid_argument("need at least one step");

    LatticeSpeedEstimate est;
    est.predicted = models::predicted_speed_exact(micro);

    auto field = u0;
    for (std::int64_t r = 1; r <= steps; ++r) {
        field = lattice::step(field, st);
        // farthest nonzero cell (the window is already stripped of zeros)
        const std::int64_t lo = field.origin();
        const std::int64_t hi = field.origin() + field.size() - 1;
        const std::int64_t edge = std::max(hi < 0 ? -hi : hi, lo < 0 ? -lo : lo);
        est.front.emplace_back(Rational(r) * micro.t_a, Rational(edge) * micro.x_a);
    }

    // Exact least squares on the (t, position) pairs.
    const Rational n(steps);
    Rational sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [t, xpos] : est.front) {
        sx += t;
        sy += xpos;
        sxx += t * t;
        sxy += t * xpos;
    }
    const Rational denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("degenerate least-squares fit");
    est.fitted = (n * sxy - sx * sy) / denom;
    return est;
}

namespace {

ConvergenceLevel run_refinement_case(const lattice::Stencil& st,
                                     const std::function<double(double)>& u0,
                                     double domain_length, double dx,
                                     const StudyConfig& config) {
    const std::int64_t m = std::llround(domain_length / dx);
    if (m < 4 || std::abs(static_cast<double>(m) * dx - domain_length) > 1e-9 * domain_length)
        throw std::invalid_argument("refinement dx must divide the domain length");
    if (m % 2 != 0) throw std::invalid_argument("refinement must give an even sample count");

    // Exact meso scales: dt = p dx^2 / D keeps D fixed across refinements.
    const Rational dx_q = rational_from_double(dx);
    const Rational d_q = rational_from_double(config.diffusivity);
    const Rational dt_q = st.p() * dx_q * dx_q / d_q;
    const double dt = to_double(dt_q);

    const double steps_real = config.t_final / dt;
    const std::int64_t steps = std::llround(steps_real);
    if (steps < 1 || std::abs(static_cast<double>(steps) * dt - config.t_final) >
                         1e-9 * config.t_final)
        throw std::invalid_argument("t_final must be an integer number of lattice steps");

    // Shared initial samples.
    Grid grid{domain_length, static_cast<int>(m)};
    Eigen::ArrayXd samples(grid.samples);
    for (int i = 0; i < grid.samples; ++i) samples[i] = u0(grid.x(i));

    // Exact lattice evolution (float arithmetic, exact update rule).
    lattice::LatticeField<double>::Vector lv(grid.samples);
    for (int i = 0; i < grid.samples; ++i) lv[i] = samples[i];
    auto lat = lattice::evolve(lattice::LatticeField<double>::ring(std::move(lv)), st, steps);
    Eigen::ArrayXd lat_values(grid.samples);
    for (int i = 0; i < grid.samples; ++i) lat_values[i] = lat.values()[i];
    ContinuumField lattice_field(grid, std::move(lat_values), config.t_final);

    // Level-N member at these meso scales.
    opcalc::ModifiedPDE pde = opcalc::derive_hierarchy(st, config.level);
    if (config.coefficient == FourthOrderCoefficient::Published && config.level >= 1) {
        for (auto& term : pde.terms)
            if (term.t_order == 0 && term.x_order == 4) term.coeff /= 3;
    }
    const models::LinearPDE member = models::instantiate(pde, dx_q, dt_q);

    solvers::SolveOptions opts;
    opts.closure = solvers::Closure::Compatibility;
    opts.policy = config.policy;
    const auto sol = solvers::spectral_solve(
        member, solvers::InitialData{ContinuumField(grid, samples, 0.0), std::nullopt},
        config.t_final, opts);

    return ConvergenceLevel{dx, dt, compare_fields(lattice_field, sol.u, config.norm)};
}

}  // namespace

ConvergenceReport convergence_study(const lattice::Stencil& st,
                                    const std::function<double(double)>& u0,
                                    double domain_length, const StudyConfig& config) {
    if (config.dx_list.size() < 2)
        throw std::invalid_argument("need at least two refinement levels");
    std::vector<double> dxs = config.dx_list;
    std::sort(dxs.begin(), dxs.end(), std::greater<>());  // coarse to fine

    ConvergenceReport report;
    report.norm = config.norm;
    {
        std::ostringstream os;
        os << "level-" << config.level;
        if (config.coefficient == FourthOrderCoefficient::Published) os << "-published";
        report.model = os.str();
    }

    report.levels.resize(dxs.size());
    const int workers = std::min<int>(max_threads(), static_cast<int>(dxs.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < dxs.size(); ++i)
            report.levels[i] = run_refinement_case(st, u0, domain_length, dxs[i], config);
    } else {
        // Independent cases; assembled by index so scheduling cannot matter.
        std::counting_semaphore<64> slots(workers);
        std::vector<std::future<ConvergenceLevel>> futures;
        futures.reserve(dxs.size());
        for (std::size_t i = 0; i < dxs.size(); ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] {
                slots.acquire();
                try {
                    ConvergenceLevel lev = run_refinement_case(st, u0, domain_length, dxs[i], config);
                    slots.release();
                    return lev;
                } catch (...) {
                    slots.release();
                    throw;
                }
            }));
        }
        for (std::size_t i = 0; i < dxs.size(); ++i) report.levels[i] = futures[i].get();
    }

    // Slope over the finest fit_levels (coarser levels are pre-asymptotic).
    const int fit = std::max(2, std::min<int>(config.fit_levels,
                                              static_cast<int>(report.levels.size())));
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = report.levels.size() - static_cast<std::size_t>(fit);
         i < report.levels.size(); ++i)
        pts.emplace_back(std::log(report.levels[i].dx), std::log(report.levels[i].error));
    report.slope = fit_slope(pts);
    return report;
}

}  // namespace mesoheat::analysis
