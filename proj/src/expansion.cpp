#include "mesoheat/expansion.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mesoheat::opcalc {

const SeriesTerm* ModifiedPDE::find(int t_order, int x_order) const {
    for (const auto& t : terms)
        if (t.t_order == t_order && t.x_order == x_order) return &t;
    return nullptr;
}

namespace {

void sort_terms(std::vector<SeriesTerm>& terms) {
    // LHS (x_order == 0) by descending time order, then RHS by spatial and
    // time order; matches the printed form.
    std::sort(terms.begin(), terms.end(), [](const SeriesTerm& a, const SeriesTerm& b) {
        const bool la = a.x_order == 0, lb = b.x_order == 0;
        if (la != lb) return la;
        if (la) return a.t_order > b.t_order;
        if (a.x_order != b.x_order) return a.x_order < b.x_order;
        return a.t_order < b.t_order;
    });
}

void annotate_quoted_values(ModifiedPDE& pde) {
    // Verification annotations for the p = 1/3 hierarchy at level >= 1: the
    // exact expansion disagrees with two commonly quoted coefficient values.
    pde.notes.push_back(
        "U_xxxx coefficient: computed 1/36·δx⁴/δt = (D/12)·δx²; "
        "the quoted value (D/36)·δx² is a factor of 3 smaller");
    pde.notes.push_back(
        "U_xxt coefficient (mixed form): computed 1/12·δx², dimension length²; "
        "the quoted value (D/36)·δx² has dimension length⁴/time");
}

}  // namespace

ModifiedPDE expand_stencil(const lattice::Stencil& st, int t_order, int x_order) {
    if (t_order < 1) throw std::invalid_argument("time order must be >= 1");
    if (x_order < 2) throw std::invalid_argument("spatial order must be >= 2");
    if (x_order % 2 != 0)
        throw std::invalid_argument(
            "spatial order must be even: odd spatial derivatives vanish by parity");

    ModifiedPDE pde;
    pde.level = -1;
    pde.form = PdeForm::SpatialOnly;

    // U(x, t+dt) - U(x, t), divided by dt: sum_j dt^{j-1}/j! * d^j_t U.
    for (int j = 1; j <= t_order; ++j)
        pde.terms.push_back({j, 0, Rational(BigInt(1), factorial(j)), j - 1, 0});

    // p[U(x+dx) - 2U(x) + U(x-dx)], divided by dt: sum_m 2p dx^{2m}/(2m)!/dt.
    for (int m = 1; 2 * m <= x_order; ++m)
        pde.terms.push_back(
            {0, 2 * m, Rational(2) * st.p() / Rational(factorial(2 * m)), -1, 2 * m});

    sort_terms(pde.terms);
    return pde;
}

ModifiedPDE derive_hierarchy(const lattice::Stencil& st, int level, PdeForm form) {
    if (level < 0) throw std::invalid_argument("hierarchy level must be >= 0");

    // Under dt ~ dx^2 with D fixed, the level-N truncation keeps exactly the
    // time derivatives through N+1 and spatial derivatives through 2(N+1).
    ModifiedPDE pde = expand_stencil(st, level + 1, 2 * (level + 1));
    pde.level = level;

    if (st.p() == Rational(1, 3) && level >= 1) annotate_quoted_values(pde);

    if (form == PdeForm::Mixed) return reduce_to_mixed_form(pde);
    return pde;
}

ModifiedPDE reduce_to_mixed_form(const ModifiedPDE& pde) {
    if (pde.level != 1)
        throw std::invalid_argument("mixed-form reduction is defined only at level 1");
    if (pde.form != PdeForm::SpatialOnly)
        throw std::invalid_argument("mixed-form reduction expects the spatial-only form");

    const SeriesTerm* fourth = pde.find(0, 4);
    const SeriesTerm* second = pde.find(0, 2);
    if (fourth == nullptr || second == nullptr)
        throw std::invalid_argument("level-1 spatial form must carry U_xx and U_xxxx terms");

    ModifiedPDE out;
    out.level = pde.level;
    out.form = PdeForm::Mixed;
    out.notes = pde.notes;
    for (const auto& t : pde.terms)
        if (!(t.t_order == 0 && t.x_order == 4)) out.terms.push_back(t);

    // c4 * U_xxxx -> (c4 / D) * U_xxt with D the U_xx coefficient; the dt
    // exponents cancel and two dx powers remain.
    SeriesTerm mixed;
    mixed.t_order = 1;
    mixed.x_order = 2;
    mixed.coeff = fourth->coeff / second->coeff;
    mixed.dt_power = fourth->dt_power - second->dt_power;
    mixed.dx_power = fourth->dx_power - second->dx_power;
    out.terms.push_back(mixed);

    sort_terms(out.terms);
    return out;
}

bool dimensionally_homogeneous(const ModifiedPDE& pde) {
    for (const auto& t : pde.terms) {
        if (t.coeff == 0) return false;
        if (t.dt_power != t.t_order - 1) return false;
        if (t.dx_power != t.x_order) return false;
    }
    return true;
}

namespace {

std::string superscript(int n) {
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                   "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string out;
    std::string plain = std::to_string(n);
    for (char c : plain) {
        if (c == '-')
            out += "⁻";
        else
            out += digits[c - '0'];
    }
    return out;
}

std::string power_token(const char* sym, int p) {
    if (p == 1) return sym;
    return std::string(sym) + superscript(p);
}

}  // namespace

std::string derivative_name(const SeriesTerm& t) {
    std::string s = "U_";
    s.append(static_cast<std::size_t>(t.x_order), 'x');
    s.append(static_cast<std::size_t>(t.t_order), 't');
    return s;
}

std::string term_value(const SeriesTerm& t) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;

    std::string num = format_rational(t.coeff);
    std::ostringstream os;
    os << num;
    if (t.dx_power > 0) os << "·" << power_token("δx", t.dx_power);
    if (t.dt_power > 0) os << "·" << power_token("δt", t.dt_power);
    if (t.dt_power < 0) os << "/" << power_token("δt", -t.dt_power);
    return os.str();
}

namespace {

/// Equation-style coefficient, e.g. "(δt/2)·", "(δx²/(3δt))·", "" for 1.
std::string coefficient_prefix(const SeriesTerm& t) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;

    const BigInt n = numerator(t.coeff);
    const BigInt d = denominator(t.coeff);

    std::vector<std::string> top, bottom;
    if (n != 1) top.push_back(n.convert_to<std::string>());
    if (t.dx_power > 0) top.push_back(power_token("δx", t.dx_power));
    if (t.dt_power > 0) top.push_back(power_token("δt", t.dt_power));
    if (d != 1) bottom.push_back(d.convert_to<std::string>());
    if (t.dt_power < 0) bottom.push_back(power_token("δt", -t.dt_power));

    if (top.empty() && bottom.empty()) return "";

    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += x;
        return s;
    };

    std::string ts = top.empty() ? "1" : join(top);
    if (bottom.empty()) return "(" + ts + ")·";
    std::string bs = join(bottom);
    if (bottom.size() > 1) bs = "(" + bs + ")";
    return "(" + ts + "/" + bs + ")·";
}

}  // namespace

std::string pretty(const ModifiedPDE& pde) {
    std::vector<SeriesTerm> terms = pde.terms;
    sort_terms(terms);

    std::string lhs, rhs;
    for (const auto& t : terms) {
        std::string piece = coefficient_prefix(t) + derivative_name(t);
        std::string& side = (t.x_order == 0) ? lhs : rhs;
        if (!side.empty()) side += " + ";
        side += piece;
    }
    if (lhs.empty()) lhs = "0";
    if (rhs.empty()) rhs = "0";
    return lhs + " = " + rhs;
}

}  // namespace mesoheat::opcalc
