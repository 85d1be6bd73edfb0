#include "mesoheat/series.hpp"

#include <stdexcept>

namespace mesoheat::opcalc {

OperatorSeries::OperatorSeries(int order) {
    if (order < 0) throw std::invalid_argument("series order must be non-negative");
    c_.assign(static_cast<std::size_t>(order) + 1, Rational(0));
}

OperatorSeries::OperatorSeries(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("series needs at least the constant term");
}

const Rational& OperatorSeries::coeff(int k) const {
    if (k < 0 || k > order()) throw std::out_of_range("series coefficient index");
    return c_[static_cast<std::size_t>(k)];
}

void OperatorSeries::set_coeff(int k, const Rational& v) {
    if (k < 0 || k > order()) throw std::out_of_range("series coefficient index");
    c_[static_cast<std::size_t>(k)] = v;
}

bool OperatorSeries::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

namespace {
int min_order(const OperatorSeries& a, const OperatorSeries& b) {
    return a.order() < b.order() ? a.order() : b.order();
}
}  // namespace

OperatorSeries OperatorSeries::add(const OperatorSeries& o) const {
    OperatorSeries r(min_order(*this, o));
    for (int k = 0; k <= r.order(); ++k) r.set_coeff(k, coeff(k) + o.coeff(k));
    return r;
}

OperatorSeries OperatorSeries::sub(const OperatorSeries& o) const {
    OperatorSeries r(min_order(*this, o));
    for (int k = 0; k <= r.order(); ++k) r.set_coeff(k, coeff(k) - o.coeff(k));
    return r;
}

OperatorSeries OperatorSeries::mul(const OperatorSeries& o) const {
    OperatorSeries r(min_order(*this, o));
    for (int i = 0; i <= r.order(); ++i) {
        if (coeff(i) == 0) continue;
        for (int j = 0; i + j <= r.order(); ++j) {
            if (o.coeff(j) == 0) continue;
            r.set_coeff(i + j, r.coeff(i + j) + coeff(i) * o.coeff(j));
        }
    }
    return r;
}

OperatorSeries OperatorSeries::compose(const OperatorSeries& inner) const {
    if (inner.coeff(0) != 0)
        throw std::invalid_argument("series composition needs a zero constant term");
    const int n = min_order(*this, inner);
    // Horner: result = c_K; result = result*inner + c_k.
    OperatorSeries result(n);
    result.set_coeff(0, coeff(order() <= n ? order() : n));
    for (int k = (order() <= n ? order() : n) - 1; k >= 0; --k) {
        result = result.mul(inner);
        result.set_coeff(0, result.coeff(0) + coeff(k));
    }
    return result;
}

OperatorSeries OperatorSeries::identity(int order) {
    OperatorSeries s(order);
    if (order >= 1) s.set_coeff(1, Rational(1));
    return s;
}

OperatorSeries OperatorSeries::one(int order) {
    OperatorSeries s(order);
    s.set_coeff(0, Rational(1));
    return s;
}

OperatorSeries log_series_coeffs(int truncation) {
    if (truncation < 1) throw std::invalid_argument("log series truncation must be >= 1");
    OperatorSeries s(truncation);
    for (int k = 1; k <= truncation; ++k)
        s.set_coeff(k, Rational((k % 2 == 1) ? 1 : -1, k));
    return s;
}

OperatorSeries shift_series_coeffs(int truncation) {
    if (truncation < 0) throw std::invalid_argument("shift series truncation must be >= 0");
    OperatorSeries s(truncation);
    for (int k = 0; k <= truncation; ++k)
        s.set_coeff(k, Rational(BigInt(1), factorial(k)));
    return s;
}

OperatorIdentityReport operator_identity_check(int truncation) {
    if (truncation < 1) throw std::invalid_argument("identity check order must be >= 1");
    const OperatorSeries z = OperatorSeries::identity(truncation);
    const OperatorSeries difference = shift_series_coeffs(truncation).sub(OperatorSeries::one(truncation));  // e^z - 1
    const OperatorSeries log1p = log_series_coeffs(truncation);

    OperatorSeries log_of_shift = log1p.compose(difference).sub(z);
    OperatorSeries shift_of_log =
        shift_series_coeffs(truncation).compose(log1p).sub(OperatorSeries::one(truncation)).sub(z);
    return OperatorIdentityReport{std::move(log_of_shift), std::move(shift_of_log)};
}

}  // namespace mesoheat::opcalc
