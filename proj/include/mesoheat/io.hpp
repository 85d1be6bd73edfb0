#pragma once

#include "mesoheat/analysis.hpp"
#include "mesoheat/continuum.hpp"
#include "mesoheat/expansion.hpp"
#include "mesoheat/lattice.hpp"
#include "mesoheat/models.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace mesoheat::io {

using json = nlohmann::ordered_json;

/// 17 significant digits: enough for an exact double round trip.
std::string format_double(double x);

// ---- CSV ----------------------------------------------------------------
// Stable column orders: lattice "s,u"; snapshots "t,x,u"; convergence
// reports "dx,dt,error,norm"; front tracks "t,front".

std::string lattice_csv(const lattice::LatticeField<double>& f);
std::string lattice_csv(const lattice::LatticeField<Rational>& f);
std::string snapshot_csv(const std::vector<solvers::ContinuumField>& history);
std::string convergence_csv(const analysis::ConvergenceReport& report);
std::string speed_csv(const analysis::SpeedEstimate& estimate);

/// Reads initial data (columns x,u; header optional). The samples must be
/// uniform from x = 0; the domain length is inferred as M*dx. Physical
/// data: all values must be non-negative unless allow_negative is set.
solvers::ContinuumField read_initial_csv(std::istream& in, bool allow_negative = false);

/// Reads one exported snapshot (columns t,x,u or x,u).
solvers::ContinuumField read_snapshot_csv(std::istream& in);

// ---- JSON ---------------------------------------------------------------

json lattice_json(const lattice::LatticeField<double>& f, const lattice::Stencil& st);
json lattice_json(const lattice::LatticeField<Rational>& f, const lattice::Stencil& st);
json pde_json(const opcalc::ModifiedPDE& pde);
json linear_pde_json(const models::LinearPDE& pde);
json dimensionless_json(const models::DimensionlessModel& m);
json speed_json(const analysis::SpeedEstimate& estimate);
json convergence_json(const analysis::ConvergenceReport& report);
json snapshot_json(const solvers::ContinuumField& f);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mesoheat::io
