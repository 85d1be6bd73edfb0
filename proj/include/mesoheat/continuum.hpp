#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>

namespace mesoheat::solvers {

/// Uniform periodic sampling of [0, length): x_m = m * length / samples.
/// samples must be even and at least 4.
struct Grid {
    double length = 0.0;
    int samples = 0;

    double dx() const { return length / samples; }
    double x(int m) const { return m * dx(); }
    bool operator==(const Grid&) const = default;
};

/// Sampled representation of a smooth periodic function u(x, t) at one time.
class ContinuumField {
public:
    ContinuumField(const Grid& grid, Eigen::ArrayXd values, double time = 0.0);

    const Grid& grid() const noexcept { return grid_; }
    double time() const noexcept { return time_; }
    const Eigen::ArrayXd& values() const noexcept { return values_; }

    double mean() const;
    double max_abs() const;

    ContinuumField with_time(double t) const { return ContinuumField(grid_, values_, t); }

private:
    Grid grid_;
    Eigen::ArrayXd values_;
    double time_;
};

/// Reflection through x = 0 on the periodic grid: out_m = in_{(M-m) mod M}.
ContinuumField mirror(const ContinuumField& f);

/// Periodized Gaussian bump of the given total mass centered at `center`
/// (images summed until they vanish at double precision).
ContinuumField gaussian_profile(const Grid& grid, double center, double sigma, double mass);

/// amplitude * sin(2*pi*wavenumber*x / length).
ContinuumField sine_profile(const Grid& grid, int wavenumber, double amplitude = 1.0);

/// Single-cell impulse: mass/dx at the sample nearest `center`, zero elsewhere.
ContinuumField spike_profile(const Grid& grid, double center, double mass = 1.0);

/// Initial state for the second-order-in-time members: the sampled field
/// and, optionally, its initial time derivative. The rate is generally not
/// obtainable from measurements, so when absent a closure rule has to
/// supply it before solving.
struct InitialData {
    ContinuumField u0;
    std::optional<ContinuumField> rate;
};

enum class Closure {
    Compatibility,  // u_t(x,0) = D u_xx(x,0), the level-0 relation
    ZeroRate,
    None,  // rate must be given explicitly
};

enum class GrowthPolicy {
    Reject,  // throw IllPosedGrowth if a carried mode grows
    Cutoff,  // zero every mode beyond the stability cutoff
    Allow,   // keep growing modes (for studying the blow-up deliberately)
};

}  // namespace mesoheat::solvers
