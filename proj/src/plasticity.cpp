#include "pfd/plasticity.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "pfd/damage_vi.hpp"
#include "pfd/energy.hpp"

namespace pfd {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double yield_at(const PlasticLaw& plaw, double alpha) { return std::max(0.0, plaw.sigma_yld_fun(alpha)); }

// Return map with the Frobenius threshold s = sqrt2 * sigma_yld given directly.
ReturnMapResult radial_return(const Sym2& trial, const Sym2& pi_old, double H, double A, double s) {
  if (!(A > 0.0) || !std::isfinite(A)) throw SolverError("return map: non-positive flow modulus");
  ReturnMapResult r;
  const Eigen::Vector2d T = dev_coords(trial) - 2.0 * H * dev_coords(pi_old);
  const double nt = T.norm();
  r.pi_new = pi_old;  // untouched when elastic, so the increment is exactly zero
  if (nt <= s) return r;
  // Magnitude m solves A m + s = |T|; linear, so the root is explicit.
  const double m = (nt - s) / A;
  if (!std::isfinite(m)) throw SolverError("return map: magnitude root-find failed");
  const Eigen::Vector2d n = T / nt;
  r.active = true;
  r.pi_new = from_dev_coords(dev_coords(pi_old) + m * n);
  r.jacobian = (n * n.transpose() + (1.0 - s / nt) * (Eigen::Matrix2d::Identity() - n * n.transpose())) / A;
  return r;
}

}  // namespace

void PlasticLaw::validate() const {
  std::vector<std::string> issues;
  if (H < 0.0 || G_nh < 0.0) issues.push_back("H and G_nh must be non-negative");
  if (!(H > 0.0 || G_nh > 0.0)) issues.push_back("H > 0 or G_nh > 0 is required");
  for (int i = 0; i <= 100; ++i)
    if (sigma_yld_fun(i / 100.0) < 0.0) {
      issues.push_back("sigma_yld must be non-negative on [0,1]");
      break;
    }
  if (kappa1 < 0.0) issues.push_back("kappa1 must be non-negative");
  if (!issues.empty()) {
    std::string msg = "invalid plastic law:";
    for (const auto& s : issues) msg += "\n  - " + s;
    throw std::invalid_argument(msg);
  }
}

ReturnMapResult return_map(const Sym2& trial, const Sym2& pi_old, const PlasticLaw& plaw, double tau,
                           double alpha_old, double coupling) {
  if (std::abs(trial.trace()) > 1e-12 * std::max(1.0, trial.norm()))
    throw std::invalid_argument("return map: trial stress must be trace-free");
  if (!(tau > 0.0)) throw std::invalid_argument("return map: tau must be positive");
  const double A = plaw.H + 2.0 * plaw.G_nh / tau + coupling;
  return radial_return(trial, pi_old, plaw.H, A, kSqrt2 * yield_at(plaw, alpha_old));
}

double return_map_residual(const Sym2& trial, const Sym2& pi_old, const Sym2& pi_new, const PlasticLaw& plaw,
                           double tau, double alpha_old, double coupling) {
  const double A = plaw.H + 2.0 * plaw.G_nh / tau + coupling;
  const double s = kSqrt2 * yield_at(plaw, alpha_old);
  const Eigen::Vector2d T = dev_coords(trial) - 2.0 * plaw.H * dev_coords(pi_old);
  const Eigen::Vector2d dp = dev_coords(pi_new) - dev_coords(pi_old);
  const double ndp = dp.norm();
  if (ndp == 0.0) return std::max(0.0, T.norm() - s);
  return (T - A * dp - s * dp / ndp).norm();
}

double mode_ii_extra_dissipation(const PlasticLaw& plaw, const MaterialLaw& law) {
  const double G = law.G_fun(1.0);
  const double gc = law.zeta_gc() + law.phi_fun.derivative()(1.0);
  const double sy = plaw.sigma_yld_fun(1.0);
  const double lo = std::sqrt(G * gc / 2.0), hi = std::sqrt(2.0 * G * gc);
  if (!(sy > lo && sy <= hi * (1.0 + 1e-15))) {
    std::ostringstream os;
    os << "tuning inequality violated: need " << lo << " < sigma_yld <= " << hi << ", got " << sy;
    throw std::invalid_argument(os.str());
  }
  if (!(plaw.H > 0.0)) throw std::invalid_argument("extra dissipation formula needs H > 0");
  return sy * (hi - sy) / plaw.H;
}

namespace {

struct Face {
  int a, b;
  double w;  // edge length / centroid distance
};

std::vector<Face> interior_faces(const Discretization& d) {
  const Mesh2D& mesh = d.mesh();
  std::map<std::pair<int, int>, int> first;
  std::vector<Face> faces;
  auto centroid = [&](int e) {
    const auto& t = mesh.triangles()[e];
    return Eigen::Vector2d((mesh.nodes()[t[0]] + mesh.nodes()[t[1]] + mesh.nodes()[t[2]]) / 3.0);
  };
  for (int e = 0; e < mesh.num_triangles(); ++e)
    for (int k = 0; k < 3; ++k) {
      int a = mesh.triangles()[e][k], b = mesh.triangles()[e][(k + 1) % 3];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = first.find(key);
      if (it == first.end()) {
        first.emplace(key, e);
        continue;
      }
      const double len = (mesh.nodes()[a] - mesh.nodes()[b]).norm();
      faces.push_back({it->second, e, len / (centroid(it->second) - centroid(e)).norm()});
    }
  return faces;
}

}  // namespace

double plastic_gradient_energy(const Discretization& d, const std::vector<Sym2>& pi) {
  if (!d.plastic() || d.plastic()->kappa1 == 0.0 || pi.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : interior_faces(d)) {
    const Sym2 j = pi[f.a] - pi[f.b];
    s += 0.5 * d.plastic()->kappa1 * f.w * ddot(j, j);
  }
  return s;
}

SimState step_staggered_plastic(const SimState& s, const Discretization& d, const SchemeConfig& cfg,
                                StepReport* report) {
  cfg.validate();
  if (!d.plastic()) throw std::invalid_argument("plastic step needs a plastic law");
  const PlasticLaw& plaw = *d.plastic();
  const int ne = d.mesh().num_triangles();
  if (s.pi.size() != static_cast<std::size_t>(ne)) throw std::invalid_argument("plastic step: state carries no pi");
  const double tau = cfg.tau;
  const auto& geom = d.geometry();
  const auto& tris = d.mesh().triangles();

  const auto Ct = d.stiffness_tensors(s.alpha);
  const auto Dt = d.viscosity_tensors(s.alpha);
  std::vector<double> sy(ne), beta(ne);
  std::vector<Sym2> eo(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& t = tris[e];
    if (d.evaluation() == AlphaEvaluation::ElementMean)
      sy[e] = yield_at(plaw, (s.alpha[t[0]] + s.alpha[t[1]] + s.alpha[t[2]]) / 3.0);
    else
      sy[e] = (yield_at(plaw, s.alpha[t[0]]) + yield_at(plaw, s.alpha[t[1]]) + yield_at(plaw, s.alpha[t[2]])) / 3.0;
    beta[e] = 2.0 * Dt[e].G / tau + Ct[e].G;
    eo[e] = d.strain(e, s.u);
  }

  const SparseOperator& M = d.mass(cfg.lumped);
  const Eigen::VectorXd F = d.loads(s.t, s.t + tau);
  const Eigen::VectorXd inert = (2.0 / tau) * (M * s.v);
  const SparseOperator Kel = (2.0 / (tau * tau)) * M +
                             assemble_iso_operator(d.mesh(), geom, [&] {
                               std::vector<IsoTensor> t(ne);
                               for (int e = 0; e < ne; ++e) t[e] = Dt[e] * (1.0 / tau) + Ct[e] * 0.5;
                               return t;
                             }());

  // kappa1 > 0: neighbour midpoints are lagged in an outer fixed point.
  const bool nonlocal = plaw.kappa1 > 0.0;
  const std::vector<Face> faces = nonlocal ? interior_faces(d) : std::vector<Face>{};
  std::vector<double> W(ne, 0.0);
  for (const auto& f : faces) {
    W[f.a] += f.w;
    W[f.b] += f.w;
  }

  Eigen::VectorXd delta = Eigen::VectorXd::Zero(d.num_dofs());
  std::vector<Sym2> dpi(ne, Sym2::Zero()), dpi_lag(ne, Sym2::Zero());
  int newton_total = 0, outer = 0;
  const Eigen::Matrix<double, 2, 3> P = [] {
    constexpr double r = 0.70710678118654752440;
    Eigen::Matrix<double, 2, 3> m;
    m << r, -r, 0.0, 0.0, 0.0, r;
    return m;
  }();

  for (;;) {
    ++outer;
    std::vector<Sym2> shift(ne, Sym2::Zero());  // nonlocal contribution to the trial stress
    if (nonlocal) {
      std::vector<Sym2> mid(ne);
      for (int e = 0; e < ne; ++e) mid[e] = s.pi[e] + 0.5 * dpi_lag[e];
      for (const auto& f : faces) {
        shift[f.a] += plaw.kappa1 * f.w * mid[f.b];
        shift[f.b] += plaw.kappa1 * f.w * mid[f.a];
      }
      for (int e = 0; e < ne; ++e) shift[e] -= plaw.kappa1 * W[e] * s.pi[e];
    }

    double r0 = -1.0, prev = 0.0;
    for (int it = 0;; ++it) {
      Eigen::VectorXd fint = Eigen::VectorXd::Zero(d.num_dofs());
      std::vector<Eigen::Triplet<double>> corr;
      for (int e = 0; e < ne; ++e) {
        const Sym2 ed = d.strain(e, delta);
        const double cpl = beta[e] + 0.5 * plaw.kappa1 * W[e];
        const Sym2 T = beta[e] * deviator(ed) + 2.0 * Ct[e].G * (deviator(eo[e]) - s.pi[e]) + shift[e];
        const double A = plaw.H + 2.0 * plaw.G_nh / tau + cpl;
        const ReturnMapResult rm = radial_return(T, s.pi[e], plaw.H, A, kSqrt2 * sy[e]);
        dpi[e] = rm.pi_new - s.pi[e];
        const Sym2 S = Dt[e].apply(ed - dpi[e]) * (1.0 / tau) + Ct[e].apply(eo[e] + 0.5 * ed - s.pi[e] - 0.5 * dpi[e]);
        const auto B = element_B(geom[e]);
        const Eigen::Matrix<double, 6, 1> fe = geom[e].area * B.transpose() * stress_to_voigt(S);
        for (int a = 0; a < 6; ++a) fint[2 * tris[e][a / 2] + a % 2] += fe[a];
        if (rm.active) {
          const Eigen::Matrix<double, 6, 6> ke =
              -geom[e].area * beta[e] * beta[e] * (P * B).transpose() * rm.jacobian * (P * B);
          for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b)
              corr.emplace_back(2 * tris[e][a / 2] + a % 2, 2 * tris[e][b / 2] + b % 2, ke(a, b));
        }
      }
      Eigen::VectorXd R = (2.0 / (tau * tau)) * (M * delta) - inert + fint - F;
      d.apply_constraints(R);
      const double rn = R.norm();
      if (r0 < 0.0) r0 = std::max({1.0, rn, F.norm(), inert.norm()});
      // Iterate to round-off; accept newton_tol once progress stalls.
      if (rn <= 1e-14 * r0 || (it > 0 && rn <= cfg.newton_tol * r0 && rn > 0.25 * prev)) break;
      prev = rn;
      if (it >= cfg.max_inner_iters) {
        std::ostringstream os;
        os << "plastic Newton iteration did not converge (residual " << rn / r0 << ")";
        throw SolverError(os.str());
      }
      SparseOperator Kc(d.num_dofs(), d.num_dofs());
      Kc.setFromTriplets(corr.begin(), corr.end());
      delta -= solve_constrained(SparseOperator(Kel + Kc), R, d, cfg);
      ++newton_total;
    }

    if (!nonlocal) break;
    double change = 0.0, size = 1e-300;
    for (int e = 0; e < ne; ++e) {
      change = std::max(change, (dpi[e] - dpi_lag[e]).norm());
      size = std::max(size, dpi[e].norm());
    }
    dpi_lag = dpi;
    if (change <= 1e-12 * size) break;
    if (outer >= cfg.max_inner_iters) throw SolverError("nonlocal plastic fixed point did not converge");
  }

  SimState ns = s;
  ns.u = s.u + delta;
  ns.v = (2.0 / tau) * delta - s.v;
  d.apply_constraints(ns.v);
  double visc = 0.0, pdiss = 0.0;
  for (int e = 0; e < ne; ++e) {
    ns.pi[e] = s.pi[e] + dpi[e];
    const Sym2 rate = d.strain(e, delta) - dpi[e];
    visc += geom[e].area * Dt[e].quad(rate) / tau;
    const double nd = dpi[e].norm();
    pdiss += geom[e].area * (kSqrt2 * sy[e] * nd + 2.0 * plaw.G_nh * nd * nd / tau);
  }
  ns.ledger.dissipated_viscous += visc;
  ns.ledger.dissipated_plastic += pdiss;
  ns.ledger.external_work += F.dot(delta);

  const DamageStepResult dr =
      solve_damage_step(d, drive_from_displacement(d, ns.u, ns.pi), s.alpha, DriveForm::Secant, tau, cfg.qp_tol);
  ns.alpha = dr.solution.alpha_new;
  ns.ledger.dissipated_damage += dr.dissipated;
  if (report) {
    report->inner_iterations = outer;
    report->newton_iterations = newton_total;
    report->qp_iterations = dr.solution.iterations;
    report->kkt_residual = dr.solution.residual;
    report->reaction = dr.solution.multiplier;
  }
  ns.t += tau;
  ns.step += 1;
  ns.ledger = energy_breakdown(ns, d, cfg.lumped);
  return ns;
}

}  // namespace pfd
