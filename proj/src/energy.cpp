#include "pfd/energy.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "pfd/plasticity.hpp"

namespace pfd {

Sym2 elastic_strain(const SimState& s, const Discretization& d, int e) {
  if (!s.varsigma.empty()) return scalar_degradation(d.law()).first.apply_inverse(s.varsigma[e]);
  Sym2 eel = d.strain(e, s.u);
  if (!s.pi.empty()) eel -= s.pi[e];
  return eel;
}

EnergyLedger energy_breakdown(const SimState& s, const Discretization& d, bool lumped_mass) {
  EnergyLedger l = s.ledger;
  l.kinetic = 0.5 * s.v.dot(d.mass(lumped_mass) * s.v);

  const auto C = d.stiffness_tensors(s.alpha);
  double el = 0.0;
  for (int e = 0; e < d.mesh().num_triangles(); ++e)
    el += 0.5 * d.geometry()[e].area * C[e].quad(elastic_strain(s, d, e));
  l.stored_elastic = el;

  const MaterialLaw& law = d.law();
  l.stored_damage = d.damage_potential_energy(s.alpha) +
                    damage_gradient_energy(d.mesh(), s.alpha, law.kappa, law.p_grad);

  double pl = 0.0;
  if (!s.pi.empty() && d.plastic()) {
    const PlasticLaw& pw = *d.plastic();
    for (int e = 0; e < d.mesh().num_triangles(); ++e)
      pl += d.geometry()[e].area * pw.H * ddot(s.pi[e], s.pi[e]);  // 1/2 H |pi|_eng^2
    if (pw.kappa1 > 0.0) pl += plastic_gradient_energy(d, s.pi);
  }
  l.stored_plastic = pl;
  return l;
}

double balance_residual(const EnergyLedger& now, const EnergyLedger& initial) {
  const double tol = 1e-12;
  auto check = [&](double a, double b, const char* what) {
    if (a < b - tol * std::max(1.0, std::abs(b)))
      throw std::invalid_argument(std::string("ledgers from different runs: cumulative ") + what + " decreased");
  };
  check(now.dissipated_viscous, initial.dissipated_viscous, "viscous dissipation");
  check(now.dissipated_damage, initial.dissipated_damage, "damage dissipation");
  check(now.dissipated_plastic, initial.dissipated_plastic, "plastic dissipation");
  const double lhs = now.total_energy() + (now.total_dissipation() - initial.total_dissipation());
  const double rhs = initial.total_energy() + (now.external_work - initial.external_work);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

std::string energy_csv_row(double t, const EnergyLedger& l, double residual) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", t, l.kinetic,
                l.stored_elastic, l.stored_damage, l.stored_plastic, l.dissipated_viscous, l.dissipated_damage,
                l.dissipated_plastic, l.external_work, residual);
  return buf;
}

std::vector<EnergyRow> read_energy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("energy CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != energy_csv_header()) throw std::runtime_error("energy CSV has an unexpected header");
  std::vector<EnergyRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[10];
    std::stringstream ss(line);
    std::string cell;
    int k = 0;
    bool ok = true;
    while (std::getline(ss, cell, ',')) {
      if (k >= 10) {
        ok = false;
        break;
      }
      char* end = nullptr;
      v[k] = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0' || !std::isfinite(v[k])) ok = false;
      ++k;
    }
    if (!ok || k != 10) throw std::runtime_error("energy CSV: malformed row at line " + std::to_string(lineno));
    EnergyRow r;
    r.t = v[0];
    r.ledger = {v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
    r.residual = v[9];
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("energy CSV has no data rows");
  return rows;
}

double max_recomputed_residual(const std::vector<EnergyRow>& rows) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, balance_residual(r.ledger, rows.front().ledger));
  return m;
}

}  // namespace pfd
