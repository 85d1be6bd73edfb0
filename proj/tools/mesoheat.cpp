// Batch front-end: every experiment is a subcommand driven by flags, a JSON
// config file, or both (flags win). Outputs are byte-stable across reruns.
//
// Exit codes: 0 success; 1 configuration or validation error; 2 numerical
// failure (IllPosedGrowth, StabilityViolation, FrontNotDetected, MissingInitialRate,
// or a declared tolerance that was not met).

#include "mesoheat/analysis.hpp"
#include "mesoheat/io.hpp"
#include "mesoheat/threads.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace mesoheat;
using io::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct ToleranceFailure : NumericalError {
    using NumericalError::NumericalError;
    const char* code() const noexcept override { return "ToleranceFailure"; }
};

// ---- config/flag merging --------------------------------------------------

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    return doc;
}

// Flag value if the user passed the flag, else the config field, else the default.
template <class T>
T pick(const CLI::Option* opt, const T& bound, const json& cfg, const char* key, const T& def) {
    if (opt != nullptr && opt->count() > 0) return bound;
    if (cfg.contains(key)) {
        try {
            return cfg.at(key).get<T>();
        } catch (const json::exception&) {
            throw std::invalid_argument(std::string("config field '") + key + "': wrong type");
        }
    }
    return def;
}

Rational pick_rational(const CLI::Option* opt, const std::string& bound, const json& cfg,
                       const char* key, const std::string& def) {
    std::string text = def;
    if (opt != nullptr && opt->count() > 0) {
        text = bound;
    } else if (cfg.contains(key)) {
        const json& v = cfg.at(key);
        text = v.is_string() ? v.get<std::string>() : v.dump();
    }
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("field '") + key + "': " + e.what());
    }
}

Rational scale_field(const json& scales, const char* key) {
    if (!scales.contains(key))
        throw std::invalid_argument(std::string("config field 'scales.") + key + "': missing");
    const json& v = scales.at(key);
    return parse_rational(v.is_string() ? v.get<std::string>() : v.dump());
}

std::optional<models::ScaleSpec> parse_scales(const json& cfg) {
    if (!cfg.contains("scales")) return std::nullopt;
    const json& s = cfg.at("scales");
    if (!s.is_object()) throw std::invalid_argument("config field 'scales': must be an object");
    const bool allow = s.value("allow_noninteger_ratios", false);
    return models::ScaleSpec::make(scale_field(s, "x_a"), scale_field(s, "t_a"),
                                   scale_field(s, "dx"), scale_field(s, "dt"),
                                   scale_field(s, "L_star"), scale_field(s, "T_star"), allow);
}

lattice::Stencil make_stencil(const Rational& p) {
    lattice::Stencil st{p};
    if (st.at_checkerboard_limit())
        std::cerr << "warning: p = 1/2 sits on the closed admissibility bound; the"
                     " alternating mode is undamped (g(pi) = -1)\n";
    return st;
}

void emit(const std::string& path, const std::string& content, const std::string& what) {
    if (path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
        io::write_text_file(path, content);
        std::cout << what << " -> " << path << "\n";
    }
}

std::vector<double> parse_times(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

solvers::Closure closure_from(const std::string& name) {
    if (name == "compatibility") return solvers::Closure::Compatibility;
    if (name == "zero") return solvers::Closure::ZeroRate;
    if (name == "none") return solvers::Closure::None;
    throw std::invalid_argument("field 'closure': expected compatibility|zero|none");
}

solvers::GrowthPolicy policy_from(const std::string& name) {
    if (name == "reject") return solvers::GrowthPolicy::Reject;
    if (name == "cutoff") return solvers::GrowthPolicy::Cutoff;
    if (name == "allow") return solvers::GrowthPolicy::Allow;
    throw std::invalid_argument("field 'policy': expected reject|cutoff|allow");
}

analysis::Norm norm_from(const std::string& name) {
    if (name == "l2") return analysis::Norm::L2;
    if (name == "linf") return analysis::Norm::LInf;
    throw std::invalid_argument("field 'norm': expected l2|linf");
}

// ---- profiles --------------------------------------------------------------

struct ProfileSpec {
    std::string kind = "gaussian";  // gaussian | sine | delta | csv
    double center = 0.0;
    double sigma = 0.1;
    double mass = 1.0;
    int wavenumber = 1;
    double amplitude = 1.0;
    std::string csv_path;
};

solvers::ContinuumField build_profile(const ProfileSpec& spec, const solvers::Grid& grid) {
    if (spec.kind == "gaussian")
        return solvers::gaussian_profile(grid, spec.center, spec.sigma, spec.mass);
    if (spec.kind == "sine") return solvers::sine_profile(grid, spec.wavenumber, spec.amplitude);
    if (spec.kind == "delta") return solvers::spike_profile(grid, spec.center, spec.mass);
    if (spec.kind == "csv") {
        std::ifstream in(spec.csv_path);
        if (!in) throw std::invalid_argument("field 'initial-csv': cannot open '" +
                                             spec.csv_path + "'");
        return io::read_initial_csv(in);
    }
    throw std::invalid_argument("field 'profile': expected gaussian|sine|delta|csv");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mesoheat: discrete heat-transfer lattice, its modified-equation hierarchy, "
                 "exact spectral solvers, and the verification harness"};
    app.require_subcommand(1);

    std::string config_path;

    // ---- simulate-lattice --------------------------------------------------
    auto* sim = app.add_subcommand("simulate-lattice", "evolve the discrete model");
    std::string sim_p = "1/3", sim_topology = "line", sim_profile = "delta",
                sim_mode = "rational", sim_out, sim_out_json;
    std::int64_t sim_steps = 1, sim_cells = 16;
    auto* sim_p_o = sim->add_option("--p", sim_p, "hop probability (rational)");
    auto* sim_topo_o = sim->add_option("--topology", sim_topology, "line|ring");
    auto* sim_prof_o = sim->add_option("--profile", sim_profile, "delta|uniform");
    auto* sim_steps_o = sim->add_option("--steps", sim_steps, "number of steps");
    auto* sim_cells_o = sim->add_option("--cells", sim_cells, "ring size M");
    auto* sim_mode_o = sim->add_option("--mode", sim_mode, "rational|float");
    auto* sim_out_o = sim->add_option("--output", sim_out, "CSV output path (default stdout)");
    auto* sim_outj_o = sim->add_option("--output-json", sim_out_json, "JSON output path");

    // ---- derive --------------------------------------------------------------
    auto* der = app.add_subcommand("derive", "derive a hierarchy member exactly");
    std::string der_p = "1/3", der_form = "spatial", der_out;
    int der_level = 1;
    auto* der_p_o = der->add_option("--p", der_p, "hop probability (rational)");
    auto* der_level_o = der->add_option("--level", der_level, "hierarchy level N >= 0");
    auto* der_form_o = der->add_option("--form", der_form, "spatial|mixed");
    auto* der_out_o = der->add_option("--output", der_out, "JSON output path (default stdout)");

    // ---- solve ---------------------------------------------------------------
    auto* sol = app.add_subcommand("solve", "solve one member spectrally");
    std::string sol_model = "heat", sol_closure = "compatibility", sol_policy = "reject";
    std::string sol_D = "1", sol_tau = "1", sol_D1 = "0", sol_D2 = "0";
    std::string sol_eps1 = "0", sol_eps2 = "0", sol_dbar = "1";
    std::string sol_p = "1/3", sol_dx = "1/32", sol_dt;
    std::string sol_profile = "gaussian", sol_csv, sol_times_text, sol_out, sol_out_json;
    int sol_modes = 64, sol_level = 1, sol_wavenumber = 1;
    double sol_length = 2 * std::numbers::pi, sol_t = 1.0;
    double sol_center = 0.0, sol_sigma = 0.1, sol_mass = 1.0, sol_amplitude = 1.0;
    bool sol_center_set = false;
    auto* sol_model_o =
        sol->add_option("--model", sol_model, "heat|telegraph|fourth-order|mixed|hierarchy");
    auto* sol_D_o = sol->add_option("--D", sol_D, "diffusivity (rational)");
    auto* sol_tau_o = sol->add_option("--tau", sol_tau, "relaxation time (rational)");
    auto* sol_D1_o = sol->add_option("--D1", sol_D1, "mixed coefficient (rational)");
    auto* sol_D2_o = sol->add_option("--D2", sol_D2, "fourth-order coefficient (rational)");
    auto* sol_eps1_o = sol->add_option("--eps1", sol_eps1, "dimensionless c_tt");
    auto* sol_eps2_o = sol->add_option("--eps2", sol_eps2, "dimensionless fourth-order scale");
    auto* sol_dbar_o = sol->add_option("--Dbar", sol_dbar, "dimensionless diffusivity");
    auto* sol_p_o = sol->add_option("--p", sol_p, "hop probability for --model hierarchy");
    auto* sol_level_o = sol->add_option("--level", sol_level, "hierarchy level (0 or 1)");
    auto* sol_dx_o = sol->add_option("--dx", sol_dx, "meso length scale (rational)");
    auto* sol_dt_o = sol->add_option("--dt", sol_dt, "meso time scale (rational; default p*dx^2/D)");
    auto* sol_modes_o = sol->add_option("--modes", sol_modes, "sample count M (even)");
    auto* sol_length_o = sol->add_option("--length", sol_length, "domain length");
    auto* sol_profile_o = sol->add_option("--profile", sol_profile, "gaussian|sine|delta|csv");
    auto* sol_csv_o = sol->add_option("--initial-csv", sol_csv, "initial data CSV (x,u)");
    auto* sol_center_o = sol->add_option("--center", sol_center, "profile center")
                             ->each([&](const std::string&) { sol_center_set = true; });
    auto* sol_sigma_o = sol->add_option("--sigma", sol_sigma, "gaussian width");
    auto* sol_mass_o = sol->add_option("--mass", sol_mass, "profile mass");
    auto* sol_wave_o = sol->add_option("--wavenumber", sol_wavenumber, "sine mode index");
    auto* sol_amp_o = sol->add_option("--amplitude", sol_amplitude, "sine amplitude");
    auto* sol_t_o = sol->add_option("--t", sol_t, "solve time");
    auto* sol_times_o = sol->add_option("--times", sol_times_text, "comma-separated times");
    auto* sol_closure_o = sol->add_option("--closure", sol_closure, "compatibility|zero|none");
    auto* sol_policy_o = sol->add_option("--policy", sol_policy, "reject|cutoff|allow");
    auto* sol_out_o = sol->add_option("--output", sol_out, "CSV output path (default stdout)");
    auto* sol_outj_o = sol->add_option("--output-json", sol_out_json, "JSON output path");

    // ---- compare ---------------------------------------------------------------
    auto* cmp = app.add_subcommand("compare", "compare two exported snapshots");
    std::string cmp_a, cmp_b, cmp_norm = "linf";
    double cmp_tol = -1.0;
    auto* cmp_a_o = cmp->add_option("--a", cmp_a, "first snapshot CSV");
    auto* cmp_b_o = cmp->add_option("--b", cmp_b, "second snapshot CSV");
    auto* cmp_norm_o = cmp->add_option("--norm", cmp_norm, "l2|linf");
    auto* cmp_tol_o = cmp->add_option("--tol", cmp_tol, "fail (exit 2) if the error exceeds this");

    // ---- speed -----------------------------------------------------------------
    auto* spd = app.add_subcommand("speed", "front-speed measurements");
    std::string spd_model = "lattice", spd_p = "1/3", spd_xa = "1", spd_ta = "1";
    std::string spd_tau = "1", spd_D = "1", spd_out, spd_out_json;
    std::int64_t spd_steps = 32;
    int spd_modes = 2048, spd_windows = 4, spd_points = 6;
    double spd_threshold = 1e-6, spd_length = 60.0, spd_sigma = 0.25, spd_mass = 1.0;
    double spd_t_start = 2.0, spd_t_end = 12.0;
    auto* spd_model_o = spd->add_option("--model", spd_model, "lattice|telegraph|heat");
    auto* spd_p_o = spd->add_option("--p", spd_p, "hop probability (lattice)");
    auto* spd_xa_o = spd->add_option("--x-a", spd_xa, "micro length scale (rational)");
    auto* spd_ta_o = spd->add_option("--t-a", spd_ta, "micro time scale (rational)");
    auto* spd_steps_o = spd->add_option("--steps", spd_steps, "lattice steps");
    auto* spd_tau_o = spd->add_option("--tau", spd_tau, "relaxation time (rational)");
    auto* spd_D_o = spd->add_option("--D", spd_D, "diffusivity (rational)");
    auto* spd_thr_o = spd->add_option("--threshold", spd_threshold, "front threshold");
    auto* spd_len_o = spd->add_option("--length", spd_length, "domain length");
    auto* spd_modes_o = spd->add_option("--modes", spd_modes, "sample count");
    auto* spd_sigma_o = spd->add_option("--sigma", spd_sigma, "spike width");
    auto* spd_mass_o = spd->add_option("--mass", spd_mass, "spike mass");
    auto* spd_ts_o = spd->add_option("--t-start", spd_t_start, "first tracked time");
    auto* spd_te_o = spd->add_option("--t-end", spd_t_end, "last tracked time");
    auto* spd_pts_o = spd->add_option("--points", spd_points, "tracked times per window");
    auto* spd_win_o = spd->add_option("--windows", spd_windows, "dyadic windows (heat)");
    auto* spd_out_o = spd->add_option("--output", spd_out, "CSV output path");
    auto* spd_outj_o = spd->add_option("--output-json", spd_out_json, "JSON output path");

    // ---- study -----------------------------------------------------------------
    auto* stu = app.add_subcommand("study", "lattice-vs-hierarchy convergence study");
    std::string stu_p = "1/3", stu_refinements = "1/16,1/32,1/64,1/128";
    std::string stu_coefficient = "derived", stu_norm = "l2", stu_policy = "cutoff";
    std::string stu_out, stu_out_json;
    int stu_level = 0, stu_fit = 3;
    double stu_t_final = 0.0625, stu_D = 1.0, stu_length = 1.0;
    double stu_center = 0.5, stu_sigma = 0.1, stu_mass = 1.0;
    double stu_expect = 0.0, stu_slope_tol = 0.0;
    auto* stu_p_o = stu->add_option("--p", stu_p, "hop probability (rational)");
    auto* stu_level_o = stu->add_option("--level", stu_level, "hierarchy level (0 or 1)");
    auto* stu_coeff_o =
        stu->add_option("--coefficient", stu_coefficient, "derived|published (level 1)");
    auto* stu_ref_o = stu->add_option("--refinements", stu_refinements,
                                      "comma-separated dx list (rationals)");
    auto* stu_tf_o = stu->add_option("--t-final", stu_t_final, "comparison time");
    auto* stu_D_o = stu->add_option("--D", stu_D, "diffusivity held fixed");
    auto* stu_norm_o = stu->add_option("--norm", stu_norm, "l2|linf");
    auto* stu_policy_o = stu->add_option("--policy", stu_policy, "reject|cutoff|allow");
    auto* stu_len_o = stu->add_option("--length", stu_length, "domain length");
    auto* stu_center_o = stu->add_option("--center", stu_center, "gaussian center");
    auto* stu_sigma_o = stu->add_option("--sigma", stu_sigma, "gaussian width");
    auto* stu_mass_o = stu->add_option("--mass", stu_mass, "gaussian mass");
    auto* stu_fit_o = stu->add_option("--fit-levels", stu_fit, "finest levels used for the fit");
    auto* stu_exp_o = stu->add_option("--expect-slope", stu_expect, "declared slope");
    auto* stu_tol_o = stu->add_option("--slope-tol", stu_slope_tol, "allowed slope deviation");
    auto* stu_out_o = stu->add_option("--output", stu_out, "CSV output path");
    auto* stu_outj_o = stu->add_option("--output-json", stu_out_json, "JSON output path");

    for (CLI::App* sub : {sim, der, sol, cmp, spd, stu})
        sub->add_option("--config", config_path, "JSON config file (flags override fields)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const json cfg = load_config(config_path);
        if (cfg.contains("command")) {
            const std::string declared = cfg.at("command").get<std::string>();
            const std::string active = app.get_subcommands().front()->get_name();
            if (declared != active)
                throw std::invalid_argument("config field 'command': declares '" + declared +
                                            "' but '" + active + "' was invoked");
        }

        // ------------------------------------------------ simulate-lattice
        if (sim->parsed()) {
            const Rational p = pick_rational(sim_p_o, sim_p, cfg, "p", "1/3");
            const auto st = make_stencil(p);
            const std::string topology = pick(sim_topo_o, sim_topology, cfg, "topology",
                                              std::string("line"));
            const std::string profile =
                pick(sim_prof_o, sim_profile, cfg, "profile", std::string("delta"));
            const std::string mode = pick(sim_mode_o, sim_mode, cfg, "mode",
                                          std::string("rational"));
            const std::int64_t steps = pick(sim_steps_o, sim_steps, cfg, "steps",
                                            static_cast<std::int64_t>(1));
            const std::int64_t cells = pick(sim_cells_o, sim_cells, cfg, "cells",
                                            static_cast<std::int64_t>(16));
            const std::string out = pick(sim_out_o, sim_out, cfg, "output", std::string());
            const std::string out_json =
                pick(sim_outj_o, sim_out_json, cfg, "output_json", std::string());
            if (steps < 0) throw std::invalid_argument("field 'steps': must be >= 0");

            // initial values: named profile or explicit config list
            std::vector<Rational> init;
            if (cfg.contains("values")) {
                for (const json& v : cfg.at("values"))
                    init.push_back(parse_rational(v.is_string() ? v.get<std::string>()
                                                                : v.dump()));
                for (const Rational& v : init)
                    if (v < 0)
                        throw std::invalid_argument("field 'values': physical data must be"
                                                    " non-negative");
            } else if (profile == "delta") {
                init.assign(1, Rational(1));
            } else if (profile == "uniform") {
                init.assign(static_cast<std::size_t>(topology == "ring" ? cells : 5),
                            Rational(1));
            } else {
                throw std::invalid_argument("field 'profile': expected delta|uniform");
            }

            lattice::LatticeField<Rational>::Vector v(
                static_cast<Eigen::Index>(init.size()));
            for (std::size_t i = 0; i < init.size(); ++i)
                v[static_cast<Eigen::Index>(i)] = init[i];

            auto make_field = [&]() {
                if (topology == "ring") {
                    if (cfg.contains("values"))
                        return lattice::LatticeField<Rational>::ring(v);
                    if (profile == "delta") {
                        lattice::LatticeField<Rational>::Vector rv(
                            static_cast<Eigen::Index>(cells));
                        for (Eigen::Index i = 0; i < rv.size(); ++i) rv[i] = 0;
                        rv[static_cast<Eigen::Index>(cells / 2)] = 1;
                        return lattice::LatticeField<Rational>::ring(std::move(rv));
                    }
                    return lattice::LatticeField<Rational>::ring(v);
                }
                if (topology != "line")
                    throw std::invalid_argument("field 'topology': expected line|ring");
                const std::int64_t origin = -static_cast<std::int64_t>(init.size() / 2);
                return lattice::LatticeField<Rational>::line(v, origin);
            };

            const auto u0 = make_field();
            const auto uf = lattice::evolve(u0, st, steps);

            std::string csv;
            json state;
            if (mode == "rational") {
                csv = io::lattice_csv(uf);
                state = io::lattice_json(uf, st);
            } else if (mode == "float") {
                lattice::LatticeField<double>::Vector dv(
                    static_cast<Eigen::Index>(u0.size()));
                for (Eigen::Index i = 0; i < dv.size(); ++i)
                    dv[i] = to_double(u0.values()[i]);
                auto f0 = topology == "ring"
                              ? lattice::LatticeField<double>::ring(std::move(dv))
                              : lattice::LatticeField<double>::line(std::move(dv), u0.origin());
                const auto ff = lattice::evolve(f0, st, steps);
                csv = io::lattice_csv(ff);
                state = io::lattice_json(ff, st);
            } else {
                throw std::invalid_argument("field 'mode': expected rational|float");
            }

            if (!out_json.empty()) io::write_text_file(out_json, state.dump(2) + "\n");
            emit(out, csv, "lattice state");
            if (!out.empty())
                std::cout << "simulate-lattice: p=" << format_rational(p)
                          << " topology=" << topology << " steps=" << steps
                          << " support=" << uf.size() << "\n";
            return 0;
        }

        // ------------------------------------------------ derive
        if (der->parsed()) {
            const Rational p = pick_rational(der_p_o, der_p, cfg, "p", "1/3");
            const int level = pick(der_level_o, der_level, cfg, "level", 1);
            const std::string form =
                pick(der_form_o, der_form, cfg, "form", std::string("spatial"));
            const std::string out = pick(der_out_o, der_out, cfg, "output", std::string());

            opcalc::PdeForm pde_form;
            if (form == "spatial")
                pde_form = opcalc::PdeForm::SpatialOnly;
            else if (form == "mixed")
                pde_form = opcalc::PdeForm::Mixed;
            else
                throw std::invalid_argument("field 'form': expected spatial|mixed");

            const auto pde = opcalc::derive_hierarchy(make_stencil(p), level, pde_form);
            json doc;
            doc["command"] = "derive";
            doc["p"] = format_rational(p);
            doc["pde"] = io::pde_json(pde);
            emit(out, doc.dump(2) + "\n", "hierarchy member");
            if (!out.empty())
                std::cout << "derive: p=" << format_rational(p) << " level=" << level
                          << " form=" << form << " terms=" << pde.terms.size() << "\n";
            return 0;
        }

        // ------------------------------------------------ solve
        if (sol->parsed()) {
            const std::string model =
                pick(sol_model_o, sol_model, cfg, "model", std::string("heat"));
            const Rational D = pick_rational(sol_D_o, sol_D, cfg, "D", "1");
            const Rational tau = pick_rational(sol_tau_o, sol_tau, cfg, "tau", "1");
            const Rational D1 = pick_rational(sol_D1_o, sol_D1, cfg, "D1", "0");
            const Rational D2 = pick_rational(sol_D2_o, sol_D2, cfg, "D2", "0");
            const Rational eps1 = pick_rational(sol_eps1_o, sol_eps1, cfg, "eps1", "0");
            const Rational eps2 = pick_rational(sol_eps2_o, sol_eps2, cfg, "eps2", "0");
            const Rational dbar = pick_rational(sol_dbar_o, sol_dbar, cfg, "Dbar", "1");

            models::LinearPDE pde = models::LinearPDE::heat(1);
            if (model == "heat") {
                pde = models::LinearPDE::heat(D);
            } else if (model == "telegraph") {
                pde = models::LinearPDE::telegraph(tau, D);
            } else if (model == "fourth-order") {
                // dimensionless family: eps1 U_tt + U_t = Dbar U_xx + eps2 Dbar U_xxxx,
                // unless an explicit D2 was given
                if (sol_D2_o->count() > 0 || cfg.contains("D2"))
                    pde = models::LinearPDE::fourth_order(tau, D, D2);
                else
                    pde = models::LinearPDE::fourth_order(eps1, dbar, eps2 * dbar);
            } else if (model == "mixed") {
                pde = models::LinearPDE::mixed(tau, D, D1);
            } else if (model == "hierarchy") {
                const Rational p = pick_rational(sol_p_o, sol_p, cfg, "p", "1/3");
                const int level = pick(sol_level_o, sol_level, cfg, "level", 1);
                const Rational dx = pick_rational(sol_dx_o, sol_dx, cfg, "dx", "1/32");
                const Rational dt = sol_dt_o->count() > 0 || cfg.contains("dt")
                                        ? pick_rational(sol_dt_o, sol_dt, cfg, "dt", "0")
                                        : p * dx * dx / D;
                pde = models::instantiate(
                    opcalc::derive_hierarchy(make_stencil(p), level), dx, dt);
            } else {
                throw std::invalid_argument(
                    "field 'model': expected heat|telegraph|fourth-order|mixed|hierarchy");
            }

            const int modes = pick(sol_modes_o, sol_modes, cfg, "modes", 64);
            const double length =
                pick(sol_length_o, sol_length, cfg, "length", 2 * std::numbers::pi);
            const solvers::Grid grid{length, modes};

            ProfileSpec prof;
            prof.kind = pick(sol_profile_o, sol_profile, cfg, "profile", std::string("gaussian"));
            prof.center = pick(sol_center_o, sol_center, cfg, "center",
                               sol_center_set ? sol_center : length / 2.0);
            prof.sigma = pick(sol_sigma_o, sol_sigma, cfg, "sigma", 0.1);
            prof.mass = pick(sol_mass_o, sol_mass, cfg, "mass", 1.0);
            prof.wavenumber = pick(sol_wave_o, sol_wavenumber, cfg, "wavenumber", 1);
            prof.amplitude = pick(sol_amp_o, sol_amplitude, cfg, "amplitude", 1.0);
            prof.csv_path = pick(sol_csv_o, sol_csv, cfg, "initial_csv", std::string());
            if (!prof.csv_path.empty()) prof.kind = "csv";
            const auto u0 = build_profile(prof, grid);

            solvers::SolveOptions opts;
            opts.closure = closure_from(
                pick(sol_closure_o, sol_closure, cfg, "closure", std::string("compatibility")));
            opts.policy =
                policy_from(pick(sol_policy_o, sol_policy, cfg, "policy", std::string("reject")));

            std::vector<double> times;
            const std::string times_text =
                pick(sol_times_o, sol_times_text, cfg, "times", std::string());
            if (!times_text.empty())
                times = parse_times(times_text);
            else
                times.push_back(pick(sol_t_o, sol_t, cfg, "t", 1.0));

            std::vector<solvers::ContinuumField> history;
            solvers::SpectralSolution last{u0, std::nullopt, false, 0};
            for (double t : times) {
                last = solvers::spectral_solve(pde, {u0, std::nullopt}, t, opts);
                history.push_back(last.u);
            }

            const std::string out = pick(sol_out_o, sol_out, cfg, "output", std::string());
            const std::string out_json =
                pick(sol_outj_o, sol_out_json, cfg, "output_json", std::string());
            if (!out_json.empty()) {
                json doc;
                doc["command"] = "solve";
                doc["model"] = model;
                doc["pde"] = io::linear_pde_json(pde);
                doc["cutoff_modes"] = last.cutoff_modes;
                doc["unstable_modes"] = last.unstable_modes;
                doc["snapshot"] = io::snapshot_json(last.u);
                io::write_text_file(out_json, doc.dump(2) + "\n");
            }
            emit(out, io::snapshot_csv(history), "solution");
            if (!out.empty()) {
                std::cout << "solve: model=" << model << " t=" << io::format_double(times.back())
                          << " mean=" << io::format_double(last.u.mean())
                          << " max=" << io::format_double(last.u.max_abs()) << "\n";
            }
            return 0;
        }

        // ------------------------------------------------ compare
        if (cmp->parsed()) {
            const std::string a_path = pick(cmp_a_o, cmp_a, cfg, "a", std::string());
            const std::string b_path = pick(cmp_b_o, cmp_b, cfg, "b", std::string());
            if (a_path.empty() || b_path.empty())
                throw std::invalid_argument("fields 'a' and 'b': two snapshot files required");
            std::ifstream fa(a_path), fb(b_path);
            if (!fa) throw std::invalid_argument("field 'a': cannot open '" + a_path + "'");
            if (!fb) throw std::invalid_argument("field 'b': cannot open '" + b_path + "'");
            const auto field_a = io::read_snapshot_csv(fa);
            const auto field_b = io::read_snapshot_csv(fb);
            const auto norm =
                norm_from(pick(cmp_norm_o, cmp_norm, cfg, "norm", std::string("linf")));
            const double err = analysis::compare_fields(field_a, field_b, norm);
            std::cout << "compare: norm=" << (norm == analysis::Norm::L2 ? "l2" : "linf")
                      << " error=" << io::format_double(err) << "\n";
            const double tol = pick(cmp_tol_o, cmp_tol, cfg, "tol", -1.0);
            if (tol >= 0.0 && err > tol)
                throw ToleranceFailure("error " + io::format_double(err) +
                                       " exceeds declared tolerance " + io::format_double(tol));
            return 0;
        }

        // ------------------------------------------------ speed
        if (spd->parsed()) {
            const std::string model =
                pick(spd_model_o, spd_model, cfg, "model", std::string("lattice"));
            const std::string out = pick(spd_out_o, spd_out, cfg, "output", std::string());
            const std::string out_json =
                pick(spd_outj_o, spd_out_json, cfg, "output_json", std::string());

            if (model == "lattice") {
                const Rational p = pick_rational(spd_p_o, spd_p, cfg, "p", "1/3");
                const Rational xa = pick_rational(spd_xa_o, spd_xa, cfg, "x_a", "1");
                const Rational ta = pick_rational(spd_ta_o, spd_ta, cfg, "t_a", "1");
                const std::int64_t steps = pick(spd_steps_o, spd_steps, cfg, "steps",
                                                static_cast<std::int64_t>(32));
                const auto est = analysis::lattice_front_speed(
                    make_stencil(p), lattice::delta_line<Rational>(), steps,
                    lattice::MicroParams(xa, ta));
                json doc;
                doc["command"] = "speed";
                doc["model"] = "lattice";
                doc["fitted_speed"] = format_rational(est.fitted);
                doc["predicted_speed"] = format_rational(est.predicted);
                doc["exact_match"] = est.fitted == est.predicted;
                if (!out_json.empty()) io::write_text_file(out_json, doc.dump(2) + "\n");
                if (!out.empty()) {
                    std::ostringstream csv;
                    csv << "t,front\n";
                    for (const auto& [t, x] : est.front)
                        csv << format_rational(t) << "," << format_rational(x) << "\n";
                    io::write_text_file(out, csv.str());
                }
                std::cout << "speed: model=lattice fitted=" << format_rational(est.fitted)
                          << " predicted=" << format_rational(est.predicted)
                          << (est.fitted == est.predicted ? " (exact)" : " (MISMATCH)") << "\n";
                return est.fitted == est.predicted ? 0 : kExitNumerical;
            }

            const double threshold = pick(spd_thr_o, spd_threshold, cfg, "threshold", 1e-6);
            const double length = pick(spd_len_o, spd_length, cfg, "length", 60.0);
            const int modes = pick(spd_modes_o, spd_modes, cfg, "modes", 2048);
            const double sigma = pick(spd_sigma_o, spd_sigma, cfg, "sigma", 0.25);
            const double mass = pick(spd_mass_o, spd_mass, cfg, "mass", 1.0);
            const solvers::Grid grid{length, modes};
            const auto spike = solvers::gaussian_profile(grid, length / 2.0, sigma, mass);
            const Rational D = pick_rational(spd_D_o, spd_D, cfg, "D", "1");

            if (model == "telegraph") {
                const Rational tau = pick_rational(spd_tau_o, spd_tau, cfg, "tau", "1");
                const auto pde = models::LinearPDE::telegraph(tau, D);
                const double t0 = pick(spd_ts_o, spd_t_start, cfg, "t_start", 2.0);
                const double t1 = pick(spd_te_o, spd_t_end, cfg, "t_end", 12.0);
                const int count = std::max(2, pick(spd_pts_o, spd_points, cfg, "points", 6));
                std::vector<solvers::ContinuumField> history;
                for (int i = 0; i < count; ++i) {
                    const double t = t0 + (t1 - t0) * i / (count - 1);
                    history.push_back(
                        solvers::spectral_solve(pde, {spike, std::nullopt}, t, {}).u);
                }
                const auto est = analysis::front_speed(history, threshold, length / 2.0,
                                                       models::predicted_speed(pde));
                if (!out_json.empty())
                    io::write_text_file(out_json, io::speed_json(est).dump(2) + "\n");
                if (!out.empty()) io::write_text_file(out, io::speed_csv(est));
                std::cout << "speed: model=telegraph fitted="
                          << io::format_double(est.fitted_speed)
                          << " predicted=" << io::format_double(*est.predicted)
                          << " deviation=" << io::format_double(est.relative_deviation) << "\n";
                return 0;
            }

            if (model == "heat") {
                // fitted speeds over dyadic early-time windows: no finite limit
                const double t_end = pick(spd_te_o, spd_t_end, cfg, "t_end", 2.0);
                const int windows = std::max(2, pick(spd_win_o, spd_windows, cfg, "windows", 4));
                const int count = std::max(2, pick(spd_pts_o, spd_points, cfg, "points", 6));
                const auto pde = models::LinearPDE::heat(D);
                json window_docs = json::array();
                std::vector<double> speeds;
                double hi = t_end;
                for (int w = 0; w < windows; ++w) {
                    const double lo = hi / 2.0;
                    std::vector<solvers::ContinuumField> history;
                    for (int i = 0; i < count; ++i) {
                        const double t = lo + (hi - lo) * i / (count - 1);
                        history.push_back(
                            solvers::spectral_solve(pde, {spike, std::nullopt}, t, {}).u);
                    }
                    const auto est = analysis::front_speed(history, threshold, length / 2.0);
                    speeds.push_back(est.fitted_speed);
                    json wd;
                    wd["t_lo"] = lo;
                    wd["t_hi"] = hi;
                    wd["fitted_speed"] = est.fitted_speed;
                    window_docs.push_back(std::move(wd));
                    hi = lo;
                }
                const double growth = speeds.back() / speeds.front();
                json doc;
                doc["command"] = "speed";
                doc["model"] = "heat";
                doc["threshold"] = threshold;
                doc["windows"] = std::move(window_docs);
                doc["speed_growth_under_refinement"] = growth;
                doc["finite_speed"] = false;
                if (!out_json.empty()) io::write_text_file(out_json, doc.dump(2) + "\n");
                std::cout << "speed: model=heat window speeds grow x"
                          << io::format_double(growth)
                          << " under refinement (no finite limit)\n";
                return 0;
            }

            throw std::invalid_argument("field 'model': expected lattice|telegraph|heat");
        }

        // ------------------------------------------------ study
        if (stu->parsed()) {
            const Rational p = pick_rational(stu_p_o, stu_p, cfg, "p", "1/3");
            analysis::StudyConfig config;
            config.level = pick(stu_level_o, stu_level, cfg, "level", 0);
            config.t_final = pick(stu_tf_o, stu_t_final, cfg, "t_final", 0.0625);
            config.diffusivity = pick(stu_D_o, stu_D, cfg, "D", 1.0);
            config.norm = norm_from(pick(stu_norm_o, stu_norm, cfg, "norm", std::string("l2")));
            config.policy =
                policy_from(pick(stu_policy_o, stu_policy, cfg, "policy", std::string("cutoff")));
            config.fit_levels = pick(stu_fit_o, stu_fit, cfg, "fit_levels", 3);
            const std::string coeff = pick(stu_coeff_o, stu_coefficient, cfg, "coefficient",
                                           std::string("derived"));
            if (coeff == "derived")
                config.coefficient = analysis::FourthOrderCoefficient::Derived;
            else if (coeff == "published")
                config.coefficient = analysis::FourthOrderCoefficient::Published;
            else
                throw std::invalid_argument("field 'coefficient': expected derived|published");

            const std::string refinements_text =
                pick(stu_ref_o, stu_refinements, cfg, "refinements",
                     std::string("1/16,1/32,1/64,1/128"));
            std::stringstream rs(refinements_text);
            std::string item;
            while (std::getline(rs, item, ','))
                if (!item.empty()) config.dx_list.push_back(to_double(parse_rational(item)));

            const double length = pick(stu_len_o, stu_length, cfg, "length", 1.0);
            const double center = pick(stu_center_o, stu_center, cfg, "center", 0.5);
            const double sigma = pick(stu_sigma_o, stu_sigma, cfg, "sigma", 0.1);
            const double mass = pick(stu_mass_o, stu_mass, cfg, "mass", 1.0);
            const double amp = mass / (sigma * std::sqrt(2.0 * std::numbers::pi));
            auto u0 = [=](double x) {
                double s = 0.0;
                for (int n = -4; n <= 4; ++n) {
                    const double d = x - center + n * length;
                    s += amp * std::exp(-d * d / (2.0 * sigma * sigma));
                }
                return s;
            };

            const auto report =
                analysis::convergence_study(make_stencil(p), u0, length, config);

            const std::string out = pick(stu_out_o, stu_out, cfg, "output", std::string());
            const std::string out_json =
                pick(stu_outj_o, stu_out_json, cfg, "output_json", std::string());
            if (!out_json.empty())
                io::write_text_file(out_json, io::convergence_json(report).dump(2) + "\n");
            emit(out, io::convergence_csv(report), "convergence report");
            std::cout << "study: model=" << report.model
                      << " slope=" << io::format_double(report.slope) << "\n";

            const double expect = pick(stu_exp_o, stu_expect, cfg, "expect_slope", 0.0);
            const double slope_tol = pick(stu_tol_o, stu_slope_tol, cfg, "slope_tol", 0.0);
            if (slope_tol > 0.0 && std::abs(report.slope - expect) > slope_tol)
                throw ToleranceFailure("slope " + io::format_double(report.slope) +
                                       " outside declared band " + io::format_double(expect) +
                                       " +/- " + io::format_double(slope_tol));
            return 0;
        }

        return 0;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
