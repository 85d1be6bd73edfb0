#pragma once

#include "mesoheat/numeric.hpp"

#include <vector>

namespace mesoheat::opcalc {

/// Truncated formal power series with exact rational coefficients.
/// Coefficients run over powers 0..order(); every operation truncates at
/// the smaller order of its operands.
class OperatorSeries {
public:
    explicit OperatorSeries(int order);
    explicit OperatorSeries(std::vector<Rational> coeffs);

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const Rational& coeff(int k) const;
    void set_coeff(int k, const Rational& v);
    const std::vector<Rational>& coeffs() const noexcept { return c_; }

    bool is_zero() const;

    OperatorSeries add(const OperatorSeries& o) const;
    OperatorSeries sub(const OperatorSeries& o) const;
    OperatorSeries mul(const OperatorSeries& o) const;

    /// this(inner); requires inner.coeff(0) == 0 so the composition is a
    /// well-defined truncated series.
    OperatorSeries compose(const OperatorSeries& inner) const;

    static OperatorSeries identity(int order);  // z
    static OperatorSeries one(int order);       // 1

private:
    std::vector<Rational> c_;
};

/// ln(1+w) expanded through w^K: coeff(k) = (-1)^{k+1}/k for k >= 1.
OperatorSeries log_series_coeffs(int truncation);

/// e^{z} expanded through z^K: coeff(k) = 1/k!.
OperatorSeries shift_series_coeffs(int truncation);

/// Formal verification that ln(1 + (e^z - 1)) = z and e^{ln(1+w)} - 1 = w
/// hold term by term through the given order.
struct OperatorIdentityReport {
    OperatorSeries log_of_shift_residual;   // ln(1 + (e^z - 1)) - z
    OperatorSeries shift_of_log_residual;   // e^{ln(1+w)} - 1 - w
    bool exact() const {
        return log_of_shift_residual.is_zero() && shift_of_log_residual.is_zero();
    }
};

OperatorIdentityReport operator_identity_check(int truncation);

}  // namespace mesoheat::opcalc
