#include "pfd/damage_vi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pfd {

namespace {

enum class Slot : unsigned char { Free, Lower, Upper, Kink };

bool has_l1(const DamageSubproblem& p) { return p.l1_weight.size() > 0; }
double weight(const DamageSubproblem& p, Eigen::Index i) { return has_l1(p) ? p.l1_weight[i] : 0.0; }

Slot classify(const DamageSubproblem& p, const Eigen::VectorXd& x, Eigen::Index i) {
  if (x[i] == p.lower[i]) return Slot::Lower;
  if (x[i] == p.upper[i]) return Slot::Upper;
  if (weight(p, i) > 0.0 && x[i] == p.l1_center[i]) return Slot::Kink;
  return Slot::Free;
}

// Subgradient of the l1 term closest to -g, and the resulting box multiplier.
void split_gradient(const DamageSubproblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& g, Eigen::Index i,
                    double& lambda, double& resid) {
  const double w = weight(p, i);
  double s = 0.0;
  if (w > 0.0) {
    if (x[i] > p.l1_center[i])
      s = w;
    else if (x[i] < p.l1_center[i])
      s = -w;
    else
      s = std::clamp(-g[i], -w, w);
  }
  const double r = g[i] + s;  // 0 = r + lambda
  lambda = 0.0;
  resid = std::abs(r);
  const bool lo = x[i] == p.lower[i], hi = x[i] == p.upper[i];
  if (lo && hi) {
    lambda = -r;
    resid = 0.0;
  } else if (lo && r > 0.0) {
    lambda = -r;
    resid = 0.0;
  } else if (hi && r < 0.0) {
    lambda = -r;
    resid = 0.0;
  }
}

double prox(const DamageSubproblem& p, Eigen::Index i, double z, double step) {
  const double w = weight(p, i);
  double y = z;
  if (w > 0.0) {
    const double c = p.l1_center[i], d = z - c, t = w * step;
    y = d > t ? z - t : (d < -t ? z + t : c);
  }
  return std::clamp(y, p.lower[i], p.upper[i]);
}

}  // namespace

double DamageSubproblem::objective(const Eigen::VectorXd& x) const {
  double f = 0.5 * x.dot(Q * x) - b.dot(x);
  if (l1_weight.size() > 0) f += l1_weight.dot((x - l1_center).cwiseAbs());
  return f;
}

double kkt_residual(const DamageSubproblem& p, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = p.Q * x - p.b;
  double r = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double lam, res;
    split_gradient(p, x, g, i, lam, res);
    r = std::max(r, res);
  }
  return r;
}

DamageSolution solve_box_qp(const DamageSubproblem& p) {
  const Eigen::Index n = p.b.size();
  if (p.Q.rows() != n || p.Q.cols() != n || p.lower.size() != n || p.upper.size() != n)
    throw std::invalid_argument("damage subproblem: inconsistent sizes");
  if (has_l1(p) && (p.l1_weight.size() != n || p.l1_center.size() != n))
    throw std::invalid_argument("damage subproblem: inconsistent l1 sizes");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(p.lower[i] <= p.upper[i])) throw std::invalid_argument("damage subproblem: lower bound above upper bound");

  DamageSolution sol;
  Eigen::VectorXd x = p.start.size() == n ? p.start : p.lower;
  for (Eigen::Index i = 0; i < n; ++i) x[i] = std::clamp(x[i], p.lower[i], p.upper[i]);

  // Step size from a Gershgorin bound on the largest eigenvalue.
  double L = 0.0, scale = 1.0;
  for (int k = 0; k < p.Q.outerSize(); ++k) {
    double row = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(p.Q, k); it; ++it) row += std::abs(it.value());
    L = std::max(L, row);
  }
  scale = std::max({1.0, p.b.lpNorm<Eigen::Infinity>(), has_l1(p) ? p.l1_weight.lpNorm<Eigen::Infinity>() : 0.0});
  // Residual tolerance relative to the problem scale (x lies in a unit box).
  const double tol = p.tol * std::max(scale, L);
  L = std::max(L, 1e-8 * scale);
  const double step = 1.0 / L;

  Eigen::VectorXd g = p.Q * x - p.b;
  std::vector<Slot> slots(n), prev(n);
  auto residual = [&]() {
    double r = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double lam, res;
      split_gradient(p, x, g, i, lam, res);
      r = std::max(r, res);
    }
    return r;
  };

  int it = 0;
  double res = residual();
  while (res > tol) {
    if (++it > p.max_iter) {
      std::ostringstream os;
      os << "damage QP did not converge in " << p.max_iter << " iterations (KKT residual " << res << ")";
      throw SolverError(os.str());
    }
    // Projected proximal-gradient sweeps until the active set is stable for 2 sweeps.
    for (Eigen::Index i = 0; i < n; ++i) prev[i] = classify(p, x, i);
    int stable = 0;
    for (int sweep = 0; sweep < 50 && stable < 2; ++sweep) {
      for (Eigen::Index i = 0; i < n; ++i) x[i] = prox(p, i, x[i] - step * g[i], step);
      g = p.Q * x - p.b;
      bool same = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        slots[i] = classify(p, x, i);
        if (slots[i] != prev[i]) same = false;
      }
      stable = same ? stable + 1 : 0;
      prev = slots;
    }
    res = residual();
    if (res <= tol) break;

    // Conjugate gradient on the free variables with the l1 sign frozen.
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (slots[i] == Slot::Free) free.push_back(i);
    if (!free.empty()) {
      const Eigen::Index m = static_cast<Eigen::Index>(free.size());
      std::vector<Eigen::Index> map(n, -1);
      for (Eigen::Index k = 0; k < m; ++k) map[free[k]] = k;
      std::vector<Eigen::Triplet<double>> trip;
      for (int k = 0; k < p.Q.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator q(p.Q, k); q; ++q)
          if (map[q.row()] >= 0 && map[q.col()] >= 0) trip.emplace_back(map[q.row()], map[q.col()], q.value());
      Eigen::SparseMatrix<double> Qf(m, m);
      Qf.setFromTriplets(trip.begin(), trip.end());
      Eigen::VectorXd r(m), lo(m), hi(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index i = free[k];
        const double w = weight(p, i);
        double s = 0.0;
        lo[k] = p.lower[i];
        hi[k] = p.upper[i];
        if (w > 0.0) {
          const double c = p.l1_center[i];
          s = x[i] > c ? w : -w;
          if (x[i] > c) lo[k] = std::max(lo[k], c);
          else hi[k] = std::min(hi[k], c);
        }
        r[k] = -(g[i] + s);
      }
      // Jacobi-preconditioned CG for Qf d = r.
      Eigen::VectorXd dinv(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const double q = Qf.coeff(k, k);
        dinv[k] = q > 0.0 ? 1.0 / q : 1.0;
      }
      Eigen::VectorXd dvec = Eigen::VectorXd::Zero(m), rr = r, z = dinv.cwiseProduct(rr), pp = z;
      double rz = rr.dot(z);
      const double r0 = rr.norm();
      for (int k = 0; k < 10 * m + 50 && rr.norm() > 1e-15 * std::max(r0, scale); ++k) {
        const Eigen::VectorXd Qp = Qf * pp;
        const double pQp = pp.dot(Qp);
        if (!(pQp > 0.0)) {
          if (k == 0) dvec = rr * step;  // flat direction: plain gradient step
          break;
        }
        const double a = rz / pQp;
        dvec += a * pp;
        rr -= a * Qp;
        z = dinv.cwiseProduct(rr);
        const double rz2 = rr.dot(z);
        pp = z + (rz2 / rz) * pp;
        rz = rz2;
      }
      // Projected backtracking on the current smooth piece.
      const double f0 = p.objective(x);
      Eigen::VectorXd xt = x;
      for (double t = 1.0; t > 1e-12; t *= 0.5) {
        xt = x;
        for (Eigen::Index k = 0; k < m; ++k) xt[free[k]] = std::clamp(x[free[k]] + t * dvec[k], lo[k], hi[k]);
        if (p.objective(xt) <= f0) {
          x = xt;
          break;
        }
      }
      g = p.Q * x - p.b;
    }
    res = residual();
  }

  sol.alpha_new = x;
  sol.bound_multiplier.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lam, r;
    split_gradient(p, x, g, i, lam, r);
    sol.bound_multiplier[i] = lam;
  }
  sol.multiplier = sol.bound_multiplier;
  sol.iterations = it;
  sol.residual = res;
  return sol;
}

// ------------------------------------------------------------------ builders

namespace {

// Quadratic model a2 x^2 + a1 x of a potential polynomial; exact when the
// potential is a convex quadratic, otherwise a convexified Taylor model at xl.
bool quadratic_model(const Polynomial& psi, double xl, double& a2, double& a1) {
  if (psi.degree() <= 2 && psi.coeff(2) >= 0.0) {
    a2 = psi.coeff(2);
    a1 = psi.coeff(1);
    return true;
  }
  const Polynomial d1 = psi.derivative();
  const double curv = std::max(d1.derivative()(xl), 0.0);
  a2 = 0.5 * curv;
  a1 = d1(xl) - curv * xl;
  return false;
}

// 2 (F(x) - F(y)) / (x - y) with F(s) = (kappa/p) s^(p/2), s = |grad|^2.
double secant_diffusivity(double x, double y, double kappa, double p) {
  const double h = 0.5 * p;
  if (std::abs(x - y) <= 1e-12 * std::max(x, y)) return kappa * std::pow(0.5 * (x + y), h - 1.0);
  return 2.0 * kappa / p * (std::pow(x, h) - std::pow(y, h)) / (x - y);
}

}  // namespace

DamageSubproblem build_damage_problem(const Discretization& d, const DamageDrive& drive,
                                      const Eigen::VectorXd& ao, const Eigen::VectorXd& al, DriveForm form,
                                      double tau, double tol) {
  const Mesh2D& mesh = d.mesh();
  const MaterialLaw& law = d.law();
  const auto& geom = d.geometry();
  const int n = mesh.num_nodes();
  if (ao.size() != n || al.size() != n) throw std::invalid_argument("damage subproblem: alpha field has wrong length");
  if (static_cast<int>(drive.weights.size()) != mesh.num_triangles())
    throw std::invalid_argument("damage subproblem: drive does not match the mesh");
  if (!(tau > 0.0)) throw std::invalid_argument("damage subproblem: tau must be positive");

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

  auto potential = [&](const StrainWeights& w, double xo) {
    const Polynomial P = law.K_fun * w.vol + law.G_fun * w.shear - law.phi_fun;
    return form == DriveForm::Secant ? P.secant_in_first(xo).antiderivative() : P;
  };

  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const double A = geom[e].area;
    const StrainWeights& w = drive.weights[e];
    if (d.evaluation() == AlphaEvaluation::ElementMean) {
      const double xo = (ao[tri[0]] + ao[tri[1]] + ao[tri[2]]) / 3.0;
      const double xl = (al[tri[0]] + al[tri[1]] + al[tri[2]]) / 3.0;
      double a2, a1;
      quadratic_model(potential(w, xo), xl, a2, a1);
      const double h = A * 2.0 * a2 / 9.0;
      for (int i = 0; i < 3; ++i) {
        b[tri[i]] -= A * a1 / 3.0;
        if (h != 0.0)
          for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], h);
      }
    } else {
      for (int i = 0; i < 3; ++i) {
        const int nd = tri[i];
        double a2, a1;
        quadratic_model(potential(w, ao[nd]), al[nd], a2, a1);
        b[nd] -= A / 3.0 * a1;
        if (a2 != 0.0) trip.emplace_back(nd, nd, A / 3.0 * 2.0 * a2);
      }
    }
  }

  // Gradient term.
  Eigen::SparseMatrix<double> S;
  if (law.p_grad == 2.0) {
    S = law.kappa * d.laplacian();
  } else {
    const auto gl = element_gradients(geom, mesh, al);
    const auto go = element_gradients(geom, mesh, ao);
    std::vector<double> k(geom.size());
    for (std::size_t e = 0; e < k.size(); ++e)
      k[e] = form == DriveForm::Secant
                 ? secant_diffusivity(gl[e].squaredNorm(), go[e].squaredNorm(), law.kappa, law.p_grad)
                 : law.kappa * std::pow(gl[e].norm(), law.p_grad - 2.0);
    S = assemble_scalar_laplacian(mesh, geom, k);
  }

  DamageSubproblem p;
  Eigen::SparseMatrix<double> Q(n, n);
  Q.setFromTriplets(trip.begin(), trip.end());
  if (form == DriveForm::Secant) {
    Q += 0.5 * S;
    b -= 0.5 * (S * ao);
  } else {
    Q += S;
  }
  // Rate viscosity nu |d|^2 / tau with lumped nodal areas.
  const Eigen::VectorXd& m = d.nodal_area();
  if (law.nu_visc > 0.0) {
    std::vector<Eigen::Triplet<double>> diag;
    for (int i = 0; i < n; ++i) {
      diag.emplace_back(i, i, 2.0 * law.nu_visc * m[i] / tau);
      b[i] += 2.0 * law.nu_visc * m[i] * ao[i] / tau;
    }
    Eigen::SparseMatrix<double> V(n, n);
    V.setFromTriplets(diag.begin(), diag.end());
    Q += V;
  }
  p.Q = Q;
  p.b = b;
  if (law.zeta_gc() > 0.0) {
    p.l1_weight = law.zeta_gc() * m;
    p.l1_center = ao;
  }
  p.lower = Eigen::VectorXd::Zero(n);
  p.upper = law.regime == Regime::Unidirectional ? Eigen::VectorXd(ao) : Eigen::VectorXd::Ones(n);
  p.start = al;
  p.tol = tol;
  return p;
}

namespace {

bool needs_outer_loop(const Discretization& d, const DamageDrive& drive, DriveForm form) {
  const MaterialLaw& law = d.law();
  if (law.p_grad != 2.0) return true;
  // The drive polynomial is K w_K + G w_G - phi; its potential is quadratic
  // when the moduli and phi are at most quadratic (secant form lowers the
  // degree by one and integrates back).
  const int deg = std::max({law.K_fun.degree(), law.G_fun.degree(), law.phi_fun.degree()});
  if (deg > 2) return true;
  for (const auto& w : drive.weights) {
    const Polynomial P = law.K_fun * w.vol + law.G_fun * w.shear - law.phi_fun;
    if (P.coeff(2) < 0.0) return true;
  }
  (void)form;
  return false;
}

}  // namespace

DamageStepResult solve_damage_step(const Discretization& d, const DamageDrive& drive, const Eigen::VectorXd& ao,
                                   DriveForm form, double tau, double tol, int max_outer) {
  const MaterialLaw& law = d.law();
  DamageStepResult out;
  const bool outer = needs_outer_loop(d, drive, form);
  Eigen::VectorXd al = ao;
  DamageSubproblem p;
  for (int k = 1;; ++k) {
    p = build_damage_problem(d, drive, ao, al, form, tau, tol);
    out.solution = solve_box_qp(p);
    out.outer_iterations = k;
    if (!outer) break;
    const double change = (out.solution.alpha_new - al).lpNorm<Eigen::Infinity>();
    if (change <= 1e-10) break;
    if (k >= max_outer) {
      std::ostringstream os;
      os << "damage fixed-point iteration did not converge (last change " << change << ")";
      throw SolverError(os.str());
    }
    al = 0.5 * (out.solution.alpha_new + al);
  }

  const Eigen::VectorXd& x = out.solution.alpha_new;
  const Eigen::VectorXd delta = x - ao;
  const Eigen::VectorXd& m = d.nodal_area();
  double diss = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    diss += m[i] * (law.zeta_gc() * std::abs(delta[i]) + 2.0 * law.nu_visc * delta[i] * delta[i] / tau);
    diss += out.solution.bound_multiplier[i] * delta[i];
  }
  out.dissipated = diss;

  // Reaction r_c: the multiplier of the [0,1] box only.
  Eigen::VectorXd& rc = out.solution.multiplier;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double lam = out.solution.bound_multiplier[i];
    if (x[i] == 0.0 && lam < 0.0)
      rc[i] = lam;
    else if (x[i] == 1.0 && law.regime == Regime::Healing && lam > 0.0)
      rc[i] = lam;
    else
      rc[i] = 0.0;
  }
  return out;
}

DamageDrive drive_from_displacement(const Discretization& d, const Eigen::VectorXd& u, const std::vector<Sym2>& pi) {
  DamageDrive dr;
  dr.weights.resize(d.mesh().num_triangles());
  for (int e = 0; e < d.mesh().num_triangles(); ++e) {
    Sym2 eel = d.strain(e, u);
    if (!pi.empty()) eel -= pi[e];
    dr.weights[e] = damage_weights(eel, d.law());
  }
  return dr;
}

DamageDrive drive_from_protostress(const Discretization& d, const std::vector<Sym2>& varsigma) {
  const auto [C1, c] = scalar_degradation(d.law());
  (void)c;
  DamageDrive dr;
  dr.weights.resize(d.mesh().num_triangles());
  for (int e = 0; e < d.mesh().num_triangles(); ++e) dr.weights[e] = strain_weights(C1.apply_inverse(varsigma[e]));
  return dr;
}

DamageSubproblem build_subproblem(const SimState& state, const Eigen::VectorXd& u_new, const Discretization& d,
                                  const SchemeConfig& cfg, SchemeKind kind) {
  DamageDrive drive;
  if (kind == SchemeKind::Explicit) {
    if (state.varsigma.size() != static_cast<std::size_t>(d.mesh().num_triangles()))
      throw std::invalid_argument("explicit scheme needs the proto-stress in the state");
    drive = drive_from_protostress(d, state.varsigma);
  } else {
    drive = drive_from_displacement(d, u_new, state.pi);
  }
  const DriveForm form = kind == SchemeKind::Monolithic ? DriveForm::Direct : DriveForm::Secant;
  return build_damage_problem(d, drive, state.alpha, state.alpha, form, cfg.tau, cfg.qp_tol);
}

}  // namespace pfd
