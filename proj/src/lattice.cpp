#include "mesoheat/lattice.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace mesoheat::lattice {

namespace {

/// g^r by squaring; keeps the sign exact for negative g and integer r.
double pow_int(double g, std::int64_t r) {
    double acc = 1.0, b = g;
    std::int64_t e = r;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

}  // namespace

LatticeField<Rational> evolve_exact_kernel(const LatticeField<Rational>& f, const Stencil& st,
                                           std::int64_t steps) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::lcm;
    using boost::multiprecision::numerator;

    const std::int64_t n0 = f.size();
    const BigInt a = numerator(st.p());
    const BigInt b = denominator(st.p());
    const BigInt c = b - 2 * a;  // center weight scaled by b; >= 0 for admissible p

    // Common denominator: every value becomes an integer numerator over L.
    BigInt L = 1;
    for (Eigen::Index i = 0; i < n0; ++i)
        L = lcm(L, denominator(f.values()[i]));
    std::vector<BigInt> cur(static_cast<std::size_t>(n0));
    for (Eigen::Index i = 0; i < n0; ++i)
        cur[static_cast<std::size_t>(i)] =
            numerator(f.values()[i]) * (L / denominator(f.values()[i]));

    const bool is_ring = f.topology() == Topology::Ring;
    std::int64_t origin = f.origin();

    if (is_ring) {
        std::vector<BigInt> next(cur.size());
        const std::size_t n = cur.size();
        for (std::int64_t r = 0; r < steps; ++r) {
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t sm = (s == 0) ? n - 1 : s - 1;
                const std::size_t sp = (s == n - 1) ? 0 : s + 1;
                next[s] = a * (cur[sm] + cur[sp]) + c * cur[s];
            }
            cur.swap(next);
        }
    } else {
        for (std::int64_t r = 0; r < steps; ++r) {
            const std::size_t n = cur.size();
            std::vector<BigInt> next(n + 2);
            for (std::size_t i = 0; i < n + 2; ++i) {
                const auto at = [&](std::size_t j, long off) -> BigInt {
                    const long idx = static_cast<long>(j) - 1 + off;
                    return (idx >= 0 && idx < static_cast<long>(n)) ? cur[static_cast<std::size_t>(idx)]
                                                                    : BigInt(0);
                };
                next[i] = a * (at(i, -1) + at(i, +1)) + c * at(i, 0);
            }
            cur.swap(next);
            --origin;
        }
    }

    // Denominator after r steps is L * b^r.
    BigInt den = L;
    for (std::int64_t r = 0; r < steps; ++r) den *= b;

    typename LatticeField<Rational>::Vector out(static_cast<Eigen::Index>(cur.size()));
    for (std::size_t i = 0; i < cur.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = Rational(cur[i], den);

    if (is_ring)
        return LatticeField<Rational>::ring(std::move(out), f.step_index() + steps);
    return LatticeField<Rational>::line(std::move(out), origin, f.step_index() + steps);
}

template <>
LatticeField<Rational> evolve<Rational>(const LatticeField<Rational>& f, const Stencil& st,
                                        std::int64_t steps) {
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");
    if (steps == 0) return f;
    return evolve_exact_kernel(f, st, steps);
}

LatticeField<double> exact_evolve_ring(const LatticeField<double>& f, const Stencil& st,
                                       std::int64_t steps) {
    if (f.topology() != Topology::Ring)
        throw std::invalid_argument("exact ring evolution requires ring topology");
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");

    const std::size_t m = static_cast<std::size_t>(f.size());
    std::vector<double> in(m);
    for (std::size_t i = 0; i < m; ++i) in[i] = f.values()[static_cast<Eigen::Index>(i)];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, in);

    const double p = st.p_as_double();
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        const double g = 1.0 - 2.0 * p * (1.0 - std::cos(theta));
        spec[j] *= pow_int(g, steps);
    }

    std::vector<double> outv;
    fft.inv(outv, spec);

    typename LatticeField<double>::Vector out(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) out[static_cast<Eigen::Index>(i)] = outv[i];
    return LatticeField<double>::ring(std::move(out), f.step_index() + steps);
}

}  // namespace mesoheat::lattice
