#pragma once

#include "mesoheat/numeric.hpp"
#include "mesoheat/stencil.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace mesoheat::lattice {

enum class Topology { Ring, Line };

namespace detail {
template <class Scalar>
Scalar scalar_cast(const Rational& r) {
    return static_cast<Scalar>(r);
}
template <>
inline double scalar_cast<double>(const Rational& r) {
    return to_double(r);
}
}  // namespace detail

/// Temperature samples on a periodic ring of M cells or on an infinite line.
///
/// A line field stores only the compact support window plus the absolute
/// index of its first stored cell; everything outside the window is exactly
/// zero. Values are immutable after construction; evolution returns new
/// fields. Scalar is double (float mode) or Rational (exact mode).
template <class Scalar>
class LatticeField {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    static LatticeField ring(Vector values, std::int64_t step_index = 0) {
        if (values.size() < 3)
            throw std::invalid_argument("ring topology needs at least 3 cells");
        return LatticeField(Topology::Ring, std::move(values), 0, step_index);
    }

    static LatticeField line(Vector values, std::int64_t origin = 0,
                             std::int64_t step_index = 0) {
        if (values.size() == 0)
            throw std::invalid_argument("line field needs at least one stored cell");
        LatticeField f(Topology::Line, std::move(values), origin, step_index);
        f.trim();
        return f;
    }

    Topology topology() const noexcept { return topo_; }
    std::int64_t size() const noexcept { return values_.size(); }
    std::int64_t origin() const noexcept { return origin_; }
    std::int64_t step_index() const noexcept { return step_; }
    const Vector& values() const noexcept { return values_; }

    /// Value at absolute cell index s (ring indices wrap, line is zero
    /// outside the stored window).
    Scalar value_at(std::int64_t s) const {
        const std::int64_t n = size();
        if (topo_ == Topology::Ring) {
            std::int64_t m = s % n;
            if (m < 0) m += n;
            return values_[static_cast<Eigen::Index>(m)];
        }
        if (s < origin_ || s >= origin_ + n) return Scalar(0);
        return values_[static_cast<Eigen::Index>(s - origin_)];
    }

private:
    LatticeField(Topology t, Vector v, std::int64_t origin, std::int64_t step)
        : topo_(t), values_(std::move(v)), origin_(origin), step_(step) {}

    void trim() {
        Eigen::Index lo = 0, hi = values_.size();
        while (lo + 1 < hi && values_[lo] == Scalar(0)) ++lo;
        while (hi - 1 > lo && values_[hi - 1] == Scalar(0)) --hi;
        if (lo == 0 && hi == values_.size()) return;
        values_ = Vector(values_.segment(lo, hi - lo));
        origin_ += lo;
    }

    Topology topo_;
    Vector values_;
    std::int64_t origin_;
    std::int64_t step_;

    template <class S>
    friend LatticeField<S> step(const LatticeField<S>&, const Stencil&);
    template <class S>
    friend LatticeField<S> mirror(const LatticeField<S>&);
    friend LatticeField<double> exact_evolve_ring(const LatticeField<double>&, const Stencil&,
                                                  std::int64_t);
    friend LatticeField<Rational> evolve_exact_kernel(const LatticeField<Rational>&,
                                                      const Stencil&, std::int64_t);
};

/// Single unit impulse at cell 0 on the line.
template <class Scalar>
LatticeField<Scalar> delta_line(Scalar amplitude = Scalar(1)) {
    typename LatticeField<Scalar>::Vector v(1);
    v[0] = amplitude;
    return LatticeField<Scalar>::line(std::move(v), 0);
}

template <class Scalar>
LatticeField<Scalar> uniform_ring(std::int64_t cells, Scalar value) {
    typename LatticeField<Scalar>::Vector v(cells);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = value;
    return LatticeField<Scalar>::ring(std::move(v));
}

/// One application of the update rule. Ring indices wrap mod M; a line
/// window is dilated by one cell on each side (then stripped of exact
/// zeros at the edges). The step index advances by one.
template <class Scalar>
LatticeField<Scalar> step(const LatticeField<Scalar>& f, const Stencil& st) {
    const Scalar wp = detail::scalar_cast<Scalar>(st.p());
    const Scalar wc = detail::scalar_cast<Scalar>(Rational(1) - 2 * st.p());
    const std::int64_t n = f.size();

    if (f.topology() == Topology::Ring) {
        typename LatticeField<Scalar>::Vector out(n);
        for (std::int64_t s = 0; s < n; ++s) {
            const std::int64_t sm = (s == 0) ? n - 1 : s - 1;
            const std::int64_t sp = (s == n - 1) ? 0 : s + 1;
            out[static_cast<Eigen::Index>(s)] =
                wp * (f.values()[static_cast<Eigen::Index>(sm)] +
                      f.values()[static_cast<Eigen::Index>(sp)]) +
                wc * f.values()[static_cast<Eigen::Index>(s)];
        }
        return LatticeField<Scalar>(Topology::Ring, std::move(out), 0, f.step_index() + 1);
    }

    typename LatticeField<Scalar>::Vector out(n + 2);
    const std::int64_t new_origin = f.origin() - 1;
    for (std::int64_t i = 0; i < n + 2; ++i) {
        const std::int64_t s = new_origin + i;
        out[static_cast<Eigen::Index>(i)] =
            wp * (f.value_at(s - 1) + f.value_at(s + 1)) + wc * f.value_at(s);
    }
    LatticeField<Scalar> g(Topology::Line, std::move(out), new_origin, f.step_index() + 1);
    g.trim();
    return g;
}

/// steps-fold composition of step(); exact in rational mode.
template <class Scalar>
LatticeField<Scalar> evolve(const LatticeField<Scalar>& f, const Stencil& st,
                            std::int64_t steps) {
    if (steps < 0) throw std::invalid_argument("step count must be non-negative");
    LatticeField<Scalar> cur = f;
    for (std::int64_t r = 0; r < steps; ++r) cur = step(cur, st);
    return cur;
}

/// Rational evolution runs on integer numerators over a common denominator;
/// identical results to iterated step(), much faster for long runs.
template <>
LatticeField<Rational> evolve<Rational>(const LatticeField<Rational>& f, const Stencil& st,
                                        std::int64_t steps);

/// Sum of all stored values (whole ring, or the support of a line field).
template <class Scalar>
Scalar total_heat(const LatticeField<Scalar>& f) {
    Scalar sum(0);
    for (Eigen::Index i = 0; i < f.values().size(); ++i) sum += f.values()[i];
    return sum;
}

/// Reflection through cell 0: out(s) = in(-s).
template <class Scalar>
LatticeField<Scalar> mirror(const LatticeField<Scalar>& f) {
    const std::int64_t n = f.size();
    typename LatticeField<Scalar>::Vector out(n);
    if (f.topology() == Topology::Ring) {
        for (std::int64_t s = 0; s < n; ++s)
            out[static_cast<Eigen::Index>(s)] = f.value_at(-s);
        return LatticeField<Scalar>(Topology::Ring, std::move(out), 0, f.step_index());
    }
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<Eigen::Index>(i)] = f.values()[static_cast<Eigen::Index>(n - 1 - i)];
    return LatticeField<Scalar>(Topology::Line, std::move(out),
                                -(f.origin() + n - 1), f.step_index());
}

/// Ring evolution through the discrete Fourier symbol: mode j is multiplied
/// by g_j^r with g_j = 1 - 2p(1 - cos(2*pi*j/M)). Exact in time; agrees
/// with evolve() to float round-off. Rejects line topology.
LatticeField<double> exact_evolve_ring(const LatticeField<double>& f, const Stencil& st,
                                       std::int64_t steps);

}  // namespace mesoheat::lattice
