#include "mesoheat/continuum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mesoheat::solvers {

ContinuumField::ContinuumField(const Grid& grid, Eigen::ArrayXd values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
    if (!(grid_.length > 0)) throw std::invalid_argument("domain length must be positive");
    if (grid_.samples < 4 || grid_.samples % 2 != 0)
        throw std::invalid_argument("sample count must be even and at least 4");
    if (values_.size() != grid_.samples)
        throw std::invalid_argument("value count does not match the grid");
}

double ContinuumField::mean() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < values_.size(); ++i) s += values_[i];
    return s / static_cast<double>(values_.size());
}

double ContinuumField::max_abs() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < values_.size(); ++i) m = std::max(m, std::abs(values_[i]));
    return m;
}

ContinuumField mirror(const ContinuumField& f) {
    const int m = f.grid().samples;
    Eigen::ArrayXd out(m);
    for (int i = 0; i < m; ++i) out[i] = f.values()[(m - i) % m];
    return ContinuumField(f.grid(), std::move(out), f.time());
}

ContinuumField gaussian_profile(const Grid& grid, double center, double sigma, double mass) {
    if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
    const double amp = mass / (sigma * std::sqrt(2.0 * std::numbers::pi));
    // Enough periodic images that the farthest one underflows at double
    // precision: exp(-(n L)^2 / (2 sigma^2)) < 1e-300.
    const int images = static_cast<int>(std::ceil(40.0 * sigma / grid.length)) + 1;
    Eigen::ArrayXd v(grid.samples);
    for (int m = 0; m < grid.samples; ++m) {
        const double x = grid.x(m);
        double s = 0.0;
        for (int n = -images; n <= images; ++n) {
            const double d = x - center + n * grid.length;
            s += amp * std::exp(-d * d / (2.0 * sigma * sigma));
        }
        v[m] = s;
    }
    return ContinuumField(grid, std::move(v), 0.0);
}

ContinuumField sine_profile(const Grid& grid, int wavenumber, double amplitude) {
    Eigen::ArrayXd v(grid.samples);
    for (int m = 0; m < grid.samples; ++m)
        v[m] = amplitude * std::sin(2.0 * std::numbers::pi * wavenumber * grid.x(m) / grid.length);
    return ContinuumField(grid, std::move(v), 0.0);
}

ContinuumField spike_profile(const Grid& grid, double center, double mass) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid.samples);
    int nearest = static_cast<int>(std::llround(center / grid.dx()));
    nearest = ((nearest % grid.samples) + grid.samples) % grid.samples;
    v[nearest] = mass / grid.dx();
    return ContinuumField(grid, std::move(v), 0.0);
}

}  // namespace mesoheat::solvers
