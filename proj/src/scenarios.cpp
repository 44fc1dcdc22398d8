#include "pfd/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "pfd/simulation.hpp"

namespace pfd {

const std::string& fig1_config_text() {
  static const std::string text = R"(# Tension rupture of a vertically stretched rectangle.
# Tractions on top and bottom, just below the homogeneous AT2 strength
# 0.3248 sqrt((K1+G1) gc / eps), send two waves toward the centre; their
# superposition exceeds the strength and a horizontal crack runs across.

[mesh]
nx = 32
ny = 64
Lx = 1
Ly = 2

[boundary]
left = free
right = sliding
top = traction
bottom = traction

[material]
law = at2-phasefield
rho = 1
K1 = 1
G1 = 1
gc = 0.001
eps_pf = 0.125      ; 4 h with h = 1/32
eps0 = 1
chi = 0.005

[scheme]
scheme = staggered
tau = 0.02
steps = 150
qp_tol = 1e-12

[load.top]
kind = traction
tag = top
gx = 0
gy = 0.04
schedule = 0 0, 0.1 1

[load.bottom]
kind = traction
tag = bottom
gx = 0
gy = -0.04
schedule = 0 0, 0.1 1

[output]
dir = fig1_out
cadence = 10
)";
  return text;
}

RunConfig fig1_config() { return parse_config_string(fig1_config_text()); }

std::vector<std::vector<int>> low_alpha_components(const Mesh2D& mesh, const Eigen::VectorXd& alpha,
                                                   double threshold) {
  const int n = mesh.num_nodes();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& t : mesh.triangles())
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (alpha[a] < threshold && alpha[b] < threshold) parent[find(a)] = find(b);
    }
  std::vector<std::vector<int>> comps;
  std::vector<int> index(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!(alpha[i] < threshold)) continue;
    const int r = find(i);
    if (index[r] < 0) {
      index[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[index[r]].push_back(i);
  }
  return comps;
}

std::string Fig1Report::summary() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "steps=%ld rupture_step=%ld min_alpha=%.4g components=%d band_height=%.4g (limit %.4g) "
                "span=%.3f final_kinetic=%.4g alpha_range=[%.3g, %.3g] monotone=%s max_residual=%.3g",
                steps, rupture_step, min_alpha, band_components, band_height, 6.0 * eps, band_span_fraction,
                final_kinetic, alpha_lo, alpha_hi, monotone ? "yes" : "no", max_residual);
  return buf;
}

Fig1Report run_fig1(const RunConfig& c, const std::string& out_dir) {
  const Problem p = build_problem(c);
  OutputSpec out = c.output;
  out.dir = out_dir;

  Fig1Report r;
  r.eps = c.material.eps_pf;
  Eigen::VectorXd prev = p.initial.alpha;
  r.alpha_lo = prev.minCoeff();
  r.alpha_hi = prev.maxCoeff();
  const RunSummary sum = run_problem(p, out, [&](const SimState& s, const StepReport&) {
    r.alpha_lo = std::min(r.alpha_lo, s.alpha.minCoeff());
    r.alpha_hi = std::max(r.alpha_hi, s.alpha.maxCoeff());
    if (c.material.regime == Regime::Unidirectional && (s.alpha.array() > prev.array()).any()) r.monotone = false;
    if (r.rupture_step < 0 && s.alpha.minCoeff() < 0.05) r.rupture_step = s.step;
    prev = s.alpha;
  });
  r.steps = sum.steps;
  r.max_residual = sum.max_residual;

  const SimState& s = sum.final_state;
  const Mesh2D& mesh = p.disc.mesh();
  r.min_alpha = s.alpha.minCoeff();
  r.final_kinetic = s.ledger.kinetic;

  double xmin = mesh.nodes()[0].x(), xmax = xmin;
  for (const auto& q : mesh.nodes()) {
    xmin = std::min(xmin, q.x());
    xmax = std::max(xmax, q.x());
  }
  r.width = xmax - xmin;

  const auto comps = low_alpha_components(mesh, s.alpha, 0.5);
  r.band_components = static_cast<int>(comps.size());
  if (!comps.empty()) {
    // Geometry of the largest component.
    const auto& band = *std::max_element(comps.begin(), comps.end(),
                                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
    double y0 = 1e300, y1 = -1e300, x0 = 1e300, x1 = -1e300;
    for (int i : band) {
      const auto& q = mesh.nodes()[i];
      y0 = std::min(y0, q.y());
      y1 = std::max(y1, q.y());
      x0 = std::min(x0, q.x());
      x1 = std::max(x1, q.x());
    }
    r.band_height = y1 - y0;
    r.band_span_fraction = (x1 - x0) / r.width;
  }
  return r;
}

}  // namespace pfd
