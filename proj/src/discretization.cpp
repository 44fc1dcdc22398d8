#include "pfd/discretization.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace pfd {

const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::Monolithic: return "monolithic";
    case SchemeKind::Staggered: return "staggered";
    case SchemeKind::Explicit: return "explicit";
  }
  return "staggered";
}

SchemeKind scheme_kind_from_string(const std::string& s) {
  if (s == "monolithic") return SchemeKind::Monolithic;
  if (s == "staggered") return SchemeKind::Staggered;
  if (s == "explicit") return SchemeKind::Explicit;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

const char* to_string(LinearSolverKind k) { return k == LinearSolverKind::CG ? "cg" : "direct"; }

LinearSolverKind linear_solver_from_string(const std::string& s) {
  if (s == "direct") return LinearSolverKind::Direct;
  if (s == "cg") return LinearSolverKind::CG;
  throw std::invalid_argument("unknown linear solver '" + s + "'");
}

void SchemeConfig::validate() const {
  std::vector<std::string> issues;
  if (!(tau > 0.0)) issues.push_back("tau must be positive");
  if (!(newton_tol > 0.0)) issues.push_back("newton_tol must be positive");
  if (!(qp_tol > 0.0)) issues.push_back("qp_tol must be positive");
  if (!(linear_tol > 0.0)) issues.push_back("linear_tol must be positive");
  if (max_inner_iters < 1) issues.push_back("max_inner_iters must be at least 1");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) issues.push_back("cfl_safety must lie in (0, 1]");
  if (!issues.empty()) {
    std::string msg = "invalid scheme configuration:";
    for (const auto& s : issues) msg += "\n  - " + s;
    throw std::invalid_argument(msg);
  }
}

Discretization::Discretization(Mesh2D mesh, MaterialLaw law, LoadProgram loads, AlphaEvaluation eval,
                               std::optional<PlasticLaw> plastic)
    : mesh_(std::move(mesh)),
      law_(std::move(law)),
      loads_(std::move(loads)),
      eval_(eval),
      plastic_(std::move(plastic)) {
  law_.validate();
  if (plastic_) plastic_->validate();
  geom_ = element_shape_gradients(mesh_);
  mass_consistent_ = assemble_mass(mesh_, law_.rho, false);
  mass_lumped_ = assemble_mass(mesh_, law_.rho, true);
  laplacian_ = assemble_scalar_laplacian(mesh_, geom_, std::vector<double>(geom_.size(), 1.0));
  nodal_area_ = Eigen::VectorXd::Zero(mesh_.num_nodes());
  for (int e = 0; e < mesh_.num_triangles(); ++e)
    for (int n : mesh_.triangles()[e]) nodal_area_[n] += geom_[e].area / 3.0;

  // Validate load tags early.
  for (const auto& tl : loads_.traction)
    if (mesh_.find_tag(tl.tag) < 0) throw MeshError("traction on unknown boundary tag '" + tl.tag + "'");

  constrained_.assign(num_dofs(), false);
  for (const auto& be : mesh_.boundary_edges()) {
    const BoundaryKind kind = mesh_.tags()[be.tag].kind;
    if (kind == BoundaryKind::Fixed) {
      for (int n : {be.a, be.b}) constrained_[2 * n] = constrained_[2 * n + 1] = true;
    } else if (kind == BoundaryKind::NormalSliding) {
      const Eigen::Vector2d d = (mesh_.nodes()[be.b] - mesh_.nodes()[be.a]).normalized();
      // Normal is perpendicular to d; only axis-aligned edges are supported.
      int comp;
      if (std::abs(d.x()) < 1e-9)
        comp = 0;
      else if (std::abs(d.y()) < 1e-9)
        comp = 1;
      else
        throw MeshError("normal-sliding condition needs axis-aligned boundary edges (tag '" +
                        mesh_.tags()[be.tag].name + "')");
      for (int n : {be.a, be.b}) constrained_[2 * n + comp] = true;
    }
  }
  for (int i = 0; i < num_dofs(); ++i)
    if (!constrained_[i]) free_dofs_.push_back(i);
}

void Discretization::apply_constraints(Eigen::VectorXd& x) const {
  for (int i = 0; i < num_dofs(); ++i)
    if (constrained_[i]) x[i] = 0.0;
}

std::vector<IsoTensor> Discretization::stiffness_tensors(const Eigen::VectorXd& alpha) const {
  std::vector<IsoTensor> t(geom_.size());
  for (int e = 0; e < mesh_.num_triangles(); ++e)
    t[e] = element_tensor(mesh_.triangles()[e], alpha, eval_, [&](double a) { return elastic_tensor(a, law_); });
  return t;
}

std::vector<IsoTensor> Discretization::viscosity_tensors(const Eigen::VectorXd& alpha) const {
  std::vector<IsoTensor> t(geom_.size());
  for (int e = 0; e < mesh_.num_triangles(); ++e)
    t[e] = element_tensor(mesh_.triangles()[e], alpha, eval_, [&](double a) { return viscosity_tensor(a, law_); });
  return t;
}

SparseOperator Discretization::stiffness(const Eigen::VectorXd& alpha) const {
  return assemble_iso_operator(mesh_, geom_, stiffness_tensors(alpha));
}

SparseOperator Discretization::viscosity(const Eigen::VectorXd& alpha) const {
  return assemble_iso_operator(mesh_, geom_, viscosity_tensors(alpha));
}

double Discretization::damage_potential_energy(const Eigen::VectorXd& alpha) const {
  double s = 0.0;
  for (int e = 0; e < mesh_.num_triangles(); ++e) {
    const auto& tri = mesh_.triangles()[e];
    if (eval_ == AlphaEvaluation::ElementMean) {
      s -= geom_[e].area * law_.phi_fun((alpha[tri[0]] + alpha[tri[1]] + alpha[tri[2]]) / 3.0);
    } else {
      for (int n : tri) s -= geom_[e].area / 3.0 * law_.phi_fun(alpha[n]);
    }
  }
  return s;
}

Eigen::VectorXd Discretization::loads(double t0, double t1) const {
  if (loads_.empty()) return Eigen::VectorXd::Zero(num_dofs());
  return assemble_loads(mesh_, loads_, t0, t1);
}

double Discretization::h_min() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& g : geom_) h = std::min(h, 2.0 * g.inradius);
  return h;
}

Eigen::VectorXd solve_constrained(const SparseOperator& A, const Eigen::VectorXd& b, const Discretization& d,
                                  const SchemeConfig& cfg) {
  const auto& free = d.free_dofs();
  const int nf = static_cast<int>(free.size());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  if (nf == 0) return x;
  std::vector<int> map(b.size(), -1);
  for (int i = 0; i < nf; ++i) map[free[i]] = i;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(A, k); it; ++it) {
      const int r = map[it.row()], c = map[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SparseOperator Af(nf, nf);
  Af.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd bf(nf);
  for (int i = 0; i < nf; ++i) bf[i] = b[free[i]];

  Eigen::VectorXd xf;
  if (cfg.linear_solver == LinearSolverKind::Direct) {
    Eigen::SimplicialLDLT<SparseOperator> ldlt(Af);
    if (ldlt.info() != Eigen::Success) throw SolverError("sparse LDLT factorisation failed");
    xf = ldlt.solve(bf);
  } else {
    Eigen::ConjugateGradient<SparseOperator, Eigen::Lower | Eigen::Upper> cg(Af);
    cg.setTolerance(cfg.linear_tol);
    cg.setMaxIterations(std::max(1000, 10 * nf));
    xf = cg.solve(bf);
    if (cg.info() != Eigen::Success) {
      std::ostringstream os;
      os << "conjugate gradient did not converge, relative residual " << cg.error();
      throw SolverError(os.str());
    }
  }
  for (int i = 0; i < nf; ++i) x[free[i]] = xf[i];
  return x;
}

}  // namespace pfd
