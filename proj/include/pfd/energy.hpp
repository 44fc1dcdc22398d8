#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pfd/discretization.hpp"
#include "pfd/state.hpp"

namespace pfd {

/// Elastic strain of element e: C1^{-1} varsigma when the state carries a
/// proto-stress, e(u) - pi otherwise.
Sym2 elastic_strain(const SimState& s, const Discretization& d, int e);

/// Snapshot energies of a state (kinetic, stored_*); the cumulative entries
/// are copied from state.ledger.
EnergyLedger energy_breakdown(const SimState& s, const Discretization& d, bool lumped_mass = false);

/// |LHS - RHS| / max(1, |RHS|) with LHS = energies at t + dissipation since
/// the start and RHS = initial energies + external work since the start.
/// Throws std::invalid_argument when the ledgers cannot come from one run
/// (a cumulative dissipation decreased).
double balance_residual(const EnergyLedger& now, const EnergyLedger& initial);

inline const char* energy_csv_header() {
  return "t,kinetic,stored_elastic,stored_damage,stored_plastic,diss_viscous,diss_damage,diss_plastic,ext_work,residual";
}

/// One CSV row (fixed %.17g formatting, no trailing newline).
std::string energy_csv_row(double t, const EnergyLedger& l, double residual);

struct EnergyRow {
  double t = 0.0;
  EnergyLedger ledger;
  double residual = 0.0;
};

/// Parse an energy CSV; throws std::runtime_error naming the first bad line.
std::vector<EnergyRow> read_energy_csv(std::istream& in);

/// Largest balance residual recomputed from the rows against the first row.
double max_recomputed_residual(const std::vector<EnergyRow>& rows);

}  // namespace pfd
