#include "mesoheat/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mesoheat::io {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string lattice_csv(const lattice::LatticeField<double>& f) {
    std::ostringstream os;
    os << "s,u\n";
    const std::int64_t base = f.topology() == lattice::Topology::Line ? f.origin() : 0;
    for (std::int64_t i = 0; i < f.size(); ++i)
        os << base + i << "," << format_double(f.values()[static_cast<Eigen::Index>(i)]) << "\n";
    return os.str();
}

std::string lattice_csv(const lattice::LatticeField<Rational>& f) {
    std::ostringstream os;
    os << "s,u\n";
    const std::int64_t base = f.topology() == lattice::Topology::Line ? f.origin() : 0;
    for (std::int64_t i = 0; i < f.size(); ++i)
        os << base + i << "," << format_rational(f.values()[static_cast<Eigen::Index>(i)])
           << "\n";
    return os.str();
}

std::string snapshot_csv(const std::vector<solvers::ContinuumField>& history) {
    std::ostringstream os;
    os << "t,x,u\n";
    for (const auto& f : history)
        for (int i = 0; i < f.grid().samples; ++i)
            os << format_double(f.time()) << "," << format_double(f.grid().x(i)) << ","
               << format_double(f.values()[i]) << "\n";
    return os.str();
}

std::string convergence_csv(const analysis::ConvergenceReport& report) {
    std::ostringstream os;
    os << "dx,dt,error,norm\n";
    const char* norm = report.norm == analysis::Norm::L2 ? "l2" : "linf";
    for (const auto& level : report.levels)
        os << format_double(level.dx) << "," << format_double(level.dt) << ","
           << format_double(level.error) << "," << norm << "\n";
    return os.str();
}

std::string speed_csv(const analysis::SpeedEstimate& estimate) {
    std::ostringstream os;
    os << "t,front\n";
    for (const auto& [t, x] : estimate.front)
        os << format_double(t) << "," << format_double(x) << "\n";
    return os.str();
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

solvers::ContinuumField field_from_columns(const std::vector<double>& xs,
                                           const std::vector<double>& us, double time,
                                           bool allow_negative) {
    const int m = static_cast<int>(xs.size());
    if (m < 4 || m % 2 != 0)
        throw std::invalid_argument("initial data needs an even sample count of at least 4");
    const double dx = xs[1] - xs[0];
    if (!(dx > 0)) throw std::invalid_argument("sample positions must increase");
    if (std::abs(xs[0]) > 1e-12 * dx * m)
        throw std::invalid_argument("sample positions must start at x = 0");
    for (int i = 0; i < m; ++i)
        if (std::abs(xs[static_cast<std::size_t>(i)] - i * dx) > 1e-9 * dx * m)
            throw std::invalid_argument("sample positions must be uniform");
    Eigen::ArrayXd v(m);
    for (int i = 0; i < m; ++i) {
        v[i] = us[static_cast<std::size_t>(i)];
        if (!allow_negative && v[i] < 0)
            throw std::invalid_argument("physical initial data must be non-negative");
    }
    return solvers::ContinuumField(solvers::Grid{dx * m, m}, std::move(v), time);
}

}  // namespace

solvers::ContinuumField read_initial_csv(std::istream& in, bool allow_negative) {
    auto rows = read_csv_rows(in);
    if (!rows.empty() && !rows[0].empty() && !is_number(rows[0][0])) rows.erase(rows.begin());
    std::vector<double> xs, us;
    for (const auto& row : rows) {
        if (row.size() != 2) throw std::invalid_argument("initial CSV needs columns x,u");
        xs.push_back(std::stod(row[0]));
        us.push_back(std::stod(row[1]));
    }
    return field_from_columns(xs, us, 0.0, allow_negative);
}

solvers::ContinuumField read_snapshot_csv(std::istream& in) {
    auto rows = read_csv_rows(in);
    if (rows.empty()) throw std::invalid_argument("empty snapshot file");
    bool has_t = false;
    if (!rows[0].empty() && !is_number(rows[0][0])) {
        has_t = rows[0].size() == 3;
        rows.erase(rows.begin());
    } else if (!rows.empty()) {
        has_t = rows[0].size() == 3;
    }
    std::vector<double> xs, us;
    double time = 0.0;
    for (const auto& row : rows) {
        if (row.size() != (has_t ? 3u : 2u))
            throw std::invalid_argument("snapshot CSV needs columns t,x,u (or x,u)");
        std::size_t c = 0;
        if (has_t) time = std::stod(row[c++]);
        xs.push_back(std::stod(row[c++]));
        us.push_back(std::stod(row[c]));
    }
    return field_from_columns(xs, us, time, /*allow_negative=*/true);
}

namespace {

template <class Scalar>
json lattice_json_impl(const lattice::LatticeField<Scalar>& f, const lattice::Stencil& st,
                       const char* mode) {
    json j;
    j["topology"] = f.topology() == lattice::Topology::Ring ? "ring" : "line";
    if (f.topology() == lattice::Topology::Ring)
        j["M"] = f.size();
    else
        j["origin"] = f.origin();
    j["p"] = format_rational(st.p());
    j["r"] = f.step_index();
    j["mode"] = mode;
    json values = json::array();
    for (std::int64_t i = 0; i < f.size(); ++i) {
        if constexpr (std::is_same_v<Scalar, Rational>)
            values.push_back(format_rational(f.values()[static_cast<Eigen::Index>(i)]));
        else
            values.push_back(f.values()[static_cast<Eigen::Index>(i)]);
    }
    j["values"] = std::move(values);
    return j;
}

}  // namespace

json lattice_json(const lattice::LatticeField<double>& f, const lattice::Stencil& st) {
    return lattice_json_impl(f, st, "float");
}

json lattice_json(const lattice::LatticeField<Rational>& f, const lattice::Stencil& st) {
    return lattice_json_impl(f, st, "rational");
}

json pde_json(const opcalc::ModifiedPDE& pde) {
    json j;
    j["level"] = pde.level;
    j["form"] = pde.form == opcalc::PdeForm::SpatialOnly ? "spatial" : "mixed";
    json terms = json::array();
    for (const auto& t : pde.terms) {
        json term;
        term["j"] = t.t_order;
        term["k"] = t.x_order;
        term["coeff"] = format_rational(t.coeff);
        term["dt_power"] = t.dt_power;
        term["dx_power"] = t.dx_power;
        term["derivative"] = opcalc::derivative_name(t);
        term["pretty"] = opcalc::term_value(t);
        terms.push_back(std::move(term));
    }
    j["terms"] = std::move(terms);
    j["pretty"] = opcalc::pretty(pde);
    if (!pde.notes.empty()) j["notes"] = pde.notes;
    return j;
}

json linear_pde_json(const models::LinearPDE& pde) {
    json j;
    j["c_tt"] = format_rational(pde.c_tt);
    j["c_xx"] = format_rational(pde.c_xx);
    j["c_x4"] = format_rational(pde.c_x4);
    j["c_xxt"] = format_rational(pde.c_xxt);
    return j;
}

json dimensionless_json(const models::DimensionlessModel& m) {
    json j;
    j["d_bar"] = format_rational(m.d_bar);
    j["eps1"] = format_rational(m.eps1);
    j["eps2"] = format_rational(m.eps2);
    return j;
}

json speed_json(const analysis::SpeedEstimate& estimate) {
    json j;
    j["threshold"] = estimate.threshold;
    j["fitted_speed"] = estimate.fitted_speed;
    if (estimate.predicted.has_value()) {
        j["predicted_speed"] = *estimate.predicted;
        j["relative_deviation"] = estimate.relative_deviation;
    }
    json pts = json::array();
    for (const auto& [t, x] : estimate.front) {
        json p;
        p["t"] = t;
        p["front"] = x;
        pts.push_back(std::move(p));
    }
    j["front"] = std::move(pts);
    return j;
}

json convergence_json(const analysis::ConvergenceReport& report) {
    json j;
    j["model"] = report.model;
    j["norm"] = report.norm == analysis::Norm::L2 ? "l2" : "linf";
    json levels = json::array();
    for (const auto& level : report.levels) {
        json l;
        l["dx"] = level.dx;
        l["dt"] = level.dt;
        l["error"] = level.error;
        levels.push_back(std::move(l));
    }
    j["levels"] = std::move(levels);
    j["slope"] = report.slope;
    return j;
}

json snapshot_json(const solvers::ContinuumField& f) {
    json j;
    j["t"] = f.time();
    j["length"] = f.grid().length;
    j["samples"] = f.grid().samples;
    json values = json::array();
    for (int i = 0; i < f.grid().samples; ++i) values.push_back(f.values()[i]);
    j["values"] = std::move(values);
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace mesoheat::io
