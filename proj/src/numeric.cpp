#include "mesoheat/numeric.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace mesoheat {

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_from_double(double x) {
    // cpp_rational assigns from double by exact binary expansion.
    return Rational(x);
}

namespace {

BigInt parse_big_int(const std::string& s, const std::string& full) {
    if (s.empty()) throw std::invalid_argument("not a rational: '" + full + "'");
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("not a rational: '" + full + "'");
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw std::invalid_argument("not a rational: '" + full + "'");
    return BigInt(s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        BigInt num = parse_big_int(s.substr(0, slash), text);
        BigInt den = parse_big_int(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rational(num, den);
    }

    // decimal / scientific form
    std::string mantissa = s;
    long expo = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        std::string es = s.substr(e + 1);
        try {
            expo = std::stol(es);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a rational: '" + text + "'");
        }
    }
    std::string digits = mantissa;
    long frac_len = 0;
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
        frac_len = static_cast<long>(mantissa.size() - dot - 1);
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
    }
    BigInt num = parse_big_int(digits, text);
    Rational r(num, 1);
    long net = expo - frac_len;
    BigInt scale = 1;
    for (long i = 0; i < (net < 0 ? -net : net); ++i) scale *= 10;
    if (net >= 0)
        r *= Rational(scale, 1);
    else
        r /= Rational(scale, 1);
    return r;
}

std::string format_rational(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

Rational rational_pow(const Rational& base, int exp) {
    if (exp == 0) return Rational(1);
    if (exp < 0) {
        if (base == 0) throw std::invalid_argument("zero base with negative exponent");
        return rational_pow(Rational(1) / base, -exp);
    }
    Rational acc(1), b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace mesoheat
