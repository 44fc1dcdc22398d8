#include "pfd/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace pfd {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = "invalid configuration (" + std::to_string(errors.size()) + " error" +
                    (errors.size() == 1 ? "" : "s") + "):";
  for (const auto& e : errors) msg += "\n  - " + e;
  return msg;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
};

const std::vector<std::string> kVarsA{"a"};
const std::vector<std::string> kVarsT{"t"};
const std::vector<std::string> kVarsXY{"x", "y"};

// Typed access to one section; every failure is appended to `errors`.
class SectionReader {
 public:
  SectionReader(Section* s, std::vector<std::string>& errors) : s_(s), errors_(errors) {}

  bool has(const std::string& key) const { return s_ && s_->entries.count(key); }

  const Entry* raw(const std::string& key, bool required) {
    if (!s_) {
      if (required) errors_.push_back("missing section [" + name() + "]");
      return nullptr;
    }
    auto it = s_->entries.find(key);
    if (it == s_->entries.end()) {
      if (required) errors_.push_back("missing required key '" + key + "' in section [" + s_->name + "]");
      return nullptr;
    }
    it->second.used = true;
    return &it->second;
  }

  void number(const std::string& key, double& out, bool required = false) {
    const Entry* e = raw(key, required);
    if (!e) return;
    const char* begin = e->value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) {
      error(*e, key, "expected a number, got '" + e->value + "'");
    } else if (*end != '\0') {
      error(*e, key, "trailing text in '" + e->value + "' (give plain SI numbers without units)");
    } else if (!std::isfinite(v)) {
      error(*e, key, "value must be finite");
    } else {
      out = v;
    }
  }

  void opt_number(const std::string& key, std::optional<double>& out) {
    if (!has(key)) return;
    double v = 0.0;
    const std::size_t n = errors_.size();
    number(key, v);
    if (errors_.size() == n) out = v;
  }

  template <class Int>
  void integer(const std::string& key, Int& out, bool required = false) {
    const Entry* e = raw(key, required);
    if (!e) return;
    const char* begin = e->value.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
      error(*e, key, "expected an integer, got '" + e->value + "'");
    else
      out = static_cast<Int>(v);
  }

  void boolean(const std::string& key, bool& out) {
    const Entry* e = raw(key, false);
    if (!e) return;
    if (e->value == "true" || e->value == "yes" || e->value == "1")
      out = true;
    else if (e->value == "false" || e->value == "no" || e->value == "0")
      out = false;
    else
      error(*e, key, "expected true or false, got '" + e->value + "'");
  }

  void string(const std::string& key, std::string& out, bool required = false) {
    const Entry* e = raw(key, required);
    if (!e) return;
    if (e->value.empty())
      error(*e, key, "empty value");
    else
      out = e->value;
  }

  template <class T, class Conv>
  void choice(const std::string& key, T& out, Conv conv, bool required = false) {
    const Entry* e = raw(key, required);
    if (!e) return;
    try {
      out = conv(e->value);
    } catch (const std::exception& ex) {
      error(*e, key, ex.what());
    }
  }

  void expr(const std::string& key, PolyExpr& out, const std::vector<std::string>& vars, bool required = false) {
    const Entry* e = raw(key, required);
    if (!e) return;
    try {
      out = PolyExpr::parse(e->value, vars);
    } catch (const ExprError& ex) {
      error(*e, key, ex.what());
    }
  }

  void error(const Entry& e, const std::string& key, const std::string& what) {
    errors_.push_back("line " + std::to_string(e.line) + ": [" + s_->name + "] " + key + ": " + what);
  }

  /// Reports every key that no accessor consumed.
  void finish() {
    if (!s_) return;
    for (const auto& k : s_->order) {
      const Entry& e = s_->entries.at(k);
      if (!e.used)
        errors_.push_back("line " + std::to_string(e.line) + ": unknown key '" + k + "' in section [" + s_->name + "]");
    }
  }

  std::string name() const { return s_ ? s_->name : "?"; }

 private:
  Section* s_;
  std::vector<std::string>& errors_;
};

std::vector<Section> split_sections(const std::string& text, std::vector<std::string>& errors) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      const std::string name = trim(line.substr(1, line.size() - 2));
      for (const auto& s : sections)
        if (s.name == name) errors.push_back("line " + std::to_string(lineno) + ": duplicate section [" + name + "]");
      sections.push_back({name, lineno, {}, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    if (sections.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key outside of any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    Section& s = sections.back();
    if (s.entries.count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "' in section [" + s.name + "]");
      continue;
    }
    s.entries[key] = {trim(line.substr(eq + 1)), lineno, false};
    s.order.push_back(key);
  }
  return sections;
}

std::vector<std::pair<double, double>> parse_schedule(const std::string& text, std::string& err) {
  std::vector<std::pair<double, double>> knots;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    double t = 0.0, v = 0.0;
    std::string extra;
    if (!(is >> t >> v) || (is >> extra)) {
      err = "schedule entries must be 't value' pairs separated by commas, got '" + trim(item) + "'";
      return {};
    }
    knots.emplace_back(t, v);
  }
  if (knots.empty()) err = "empty schedule";
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i].first > knots[i - 1].first)) err = "schedule times must be strictly increasing";
  return knots;
}

bool law_is_preset(const std::string& law) {
  try {
    const LawKind k = law_kind_from_string(law);
    return k == LawKind::AT1 || k == LawKind::AT2;
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> mesh_tags(const RunConfig& c, const std::string& base_dir, std::vector<std::string>& errors) {
  if (c.mesh.file.empty()) return {"left", "right", "bottom", "top"};
  try {
    const Mesh2D m = build_mesh(c, base_dir);
    std::vector<std::string> tags;
    for (const auto& t : m.tags()) tags.push_back(t.name);
    return tags;
  } catch (const std::exception& ex) {
    errors.push_back(std::string("[mesh] file: ") + ex.what());
    return {};
  }
}

RunConfig parse_impl(const std::string& text, const std::string& base_dir) {
  std::vector<std::string> errors;
  std::vector<Section> sections = split_sections(text, errors);
  auto find = [&](const std::string& name) -> Section* {
    for (auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  };
  const std::set<std::string> known{"mesh", "boundary", "material", "plasticity", "scheme", "initial", "output"};
  for (const auto& s : sections)
    if (!known.count(s.name) && s.name.rfind("load.", 0) != 0)
      errors.push_back("line " + std::to_string(s.line) + ": unknown section [" + s.name + "]");

  RunConfig c;

  {
    SectionReader r(find("mesh"), errors);
    if (r.has("file")) {
      r.string("file", c.mesh.file);
    } else {
      r.integer("nx", c.mesh.nx, true);
      r.integer("ny", c.mesh.ny, true);
      r.number("Lx", c.mesh.Lx, true);
      r.number("Ly", c.mesh.Ly, true);
      if (r.has("nx") && r.has("ny") && (c.mesh.nx < 1 || c.mesh.ny < 1))
        errors.push_back("[mesh] nx and ny must be at least 1");
      if (r.has("Lx") && r.has("Ly") && !(c.mesh.Lx > 0.0 && c.mesh.Ly > 0.0))
        errors.push_back("[mesh] Lx and Ly must be positive");
    }
    r.finish();
  }

  const std::vector<std::string> tags = mesh_tags(c, base_dir, errors);
  auto tag_exists = [&](const std::string& t) {
    for (const auto& x : tags)
      if (x == t) return true;
    return tags.empty();  // unreadable mesh file already reported
  };

  if (Section* s = find("boundary")) {
    SectionReader r(s, errors);
    for (const auto& key : s->order) {
      BoundaryKind kind = BoundaryKind::Free;
      r.choice(key, kind, boundary_kind_from_string);
      if (!tag_exists(key))
        errors.push_back("line " + std::to_string(s->entries[key].line) + ": [boundary] tag '" + key +
                         "' does not exist in the mesh");
      c.boundary[key] = kind;
    }
  }

  {
    MaterialSpec& m = c.material;
    SectionReader r(find("material"), errors);
    r.string("law", m.law, true);
    r.number("rho", m.rho, true);
    if (!m.law.empty()) {
      bool known_law = true;
      try {
        law_kind_from_string(m.law);
      } catch (const std::exception&) {
        known_law = false;
      }
      if (!known_law) {
        errors.push_back("[material] law: unknown law '" + m.law +
                         "' (expected linear-damage, mode-sensitive, at2-phasefield or at1-phasefield)");
      } else if (law_is_preset(m.law)) {
        r.number("K1", m.K1, true);
        r.number("G1", m.G1, true);
        r.number("gc", m.gc, true);
        r.number("eps_pf", m.eps_pf, true);
        r.number("eps0", m.eps0);
      } else {
        r.expr("K", m.K, kVarsA, true);
        r.expr("G", m.G, kVarsA, true);
        m.phi = PolyExpr::constant(0.0, kVarsA);
        r.expr("phi", m.phi, kVarsA);
        r.number("gc", m.gc);
        if (!r.has("kappa")) errors.push_back("missing required key 'kappa' in section [material]");
      }
    }
    r.opt_number("kappa", m.kappa);
    r.number("p_grad", m.p_grad);
    r.number("nu_visc", m.nu_visc);
    r.number("D0_K", m.D0_K);
    r.number("D0_G", m.D0_G);
    r.number("chi", m.chi);
    r.number("eps_reg", m.eps_reg);
    r.choice("regime", m.regime, regime_from_string);
    r.choice("alpha_eval", m.alpha_eval, alpha_evaluation_from_string);
    r.finish();
  }

  if (Section* s = find("plasticity")) {
    PlasticSpec p;
    p.sigma_yld = PolyExpr::constant(0.0, kVarsA);
    SectionReader r(s, errors);
    r.number("H", p.H);
    r.number("G_nh", p.G_nh);
    r.number("kappa1", p.kappa1);
    r.expr("sigma_yld", p.sigma_yld, kVarsA, true);
    r.finish();
    c.plasticity = p;
  }

  {
    SchemeConfig& sc = c.scheme;
    SectionReader r(find("scheme"), errors);
    r.choice("scheme", sc.scheme, scheme_kind_from_string, true);
    r.number("tau", sc.tau, true);
    r.integer("steps", c.steps, true);
    r.number("newton_tol", sc.newton_tol);
    r.number("qp_tol", sc.qp_tol);
    r.integer("max_inner_iters", sc.max_inner_iters);
    r.number("cfl_safety", sc.cfl_safety);
    r.boolean("lumped", sc.lumped);
    r.choice("linear_solver", sc.linear_solver, linear_solver_from_string);
    r.number("linear_tol", sc.linear_tol);
    r.finish();
    if (c.steps < 0) errors.push_back("[scheme] steps must be non-negative");
    if (sc.max_inner_iters < 1) errors.push_back("[scheme] max_inner_iters must be at least 1");
    try {
      if (r.has("tau")) sc.validate();
    } catch (const std::exception& ex) {
      errors.push_back(std::string("[scheme] ") + ex.what());
    }
  }

  for (auto& s : sections) {
    if (s.name.rfind("load.", 0) != 0) continue;
    LoadSpec l;
    l.name = s.name.substr(5);
    SectionReader r(&s, errors);
    std::string kind;
    r.string("kind", kind, true);
    if (!kind.empty() && kind != "traction" && kind != "body")
      errors.push_back("[" + s.name + "] kind must be traction or body, got '" + kind + "'");
    l.traction = kind != "body";
    if (l.traction) {
      r.string("tag", l.tag, true);
      if (!l.tag.empty() && !tag_exists(l.tag))
        errors.push_back("[" + s.name + "] tag '" + l.tag + "' does not exist in the mesh");
    }
    r.number("gx", l.gx);
    r.number("gy", l.gy);
    if (r.has("time") && r.has("schedule")) errors.push_back("[" + s.name + "] give either time or schedule, not both");
    if (r.has("schedule")) {
      std::string text;
      r.string("schedule", text);
      std::string err;
      l.schedule = parse_schedule(text, err);
      if (!err.empty()) errors.push_back("[" + s.name + "] schedule: " + err);
    } else {
      PolyExpr p = PolyExpr::constant(1.0, kVarsT);
      r.expr("time", p, kVarsT);
      l.time_poly = p;
    }
    r.finish();
    c.loads.push_back(l);
  }

  {
    InitialSpec& ic = c.initial;
    ic.ux = ic.uy = ic.vx = ic.vy = PolyExpr::constant(0.0, kVarsXY);
    ic.alpha = PolyExpr::constant(1.0, kVarsXY);
    SectionReader r(find("initial"), errors);
    r.expr("ux", ic.ux, kVarsXY);
    r.expr("uy", ic.uy, kVarsXY);
    r.expr("vx", ic.vx, kVarsXY);
    r.expr("vy", ic.vy, kVarsXY);
    r.expr("alpha", ic.alpha, kVarsXY);
    r.finish();
  }

  {
    OutputSpec& o = c.output;
    SectionReader r(find("output"), errors);
    r.string("dir", o.dir);
    r.integer("cadence", o.cadence);
    r.boolean("vtk", o.vtk);
    r.string("csv", o.csv);
    r.string("prefix", o.prefix);
    r.finish();
    if (o.cadence < 1) errors.push_back("[output] cadence must be at least 1");
  }

  // Semantic checks of the assembled objects.
  if (errors.empty()) {
    try {
      build_material(c).validate();
    } catch (const std::exception& ex) {
      errors.push_back(std::string("[material] ") + ex.what());
    }
    try {
      if (auto p = build_plastic(c)) p->validate();
    } catch (const std::exception& ex) {
      errors.push_back(std::string("[plasticity] ") + ex.what());
    }
  }

  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument(join_errors(errors)), errors_(std::move(errors)) {}

TimeFunction LoadSpec::time_function() const {
  if (time_poly) return TimeFunction::polynomial(time_poly->to_polynomial("t"));
  return TimeFunction::schedule(schedule);
}

bool RunConfig::operator==(const RunConfig& o) const {
  const SchemeConfig &a = scheme, &b = o.scheme;
  const bool same_scheme = a.scheme == b.scheme && a.tau == b.tau && a.newton_tol == b.newton_tol &&
                           a.qp_tol == b.qp_tol && a.max_inner_iters == b.max_inner_iters &&
                           a.cfl_safety == b.cfl_safety && a.lumped == b.lumped &&
                           a.linear_solver == b.linear_solver && a.linear_tol == b.linear_tol;
  return same_scheme && mesh == o.mesh && boundary == o.boundary && material == o.material &&
         plasticity == o.plasticity && steps == o.steps && loads == o.loads && initial == o.initial &&
         output == o.output;
}

RunConfig parse_config_string(const std::string& text) { return parse_impl(text, "."); }

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_impl(ss.str(), parent.empty() ? "." : parent.string());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[mesh]\n";
  if (!c.mesh.file.empty()) {
    os << "file = " << c.mesh.file << "\n";
  } else {
    os << "nx = " << c.mesh.nx << "\nny = " << c.mesh.ny << "\nLx = " << fmt(c.mesh.Lx) << "\nLy = " << fmt(c.mesh.Ly)
       << "\n";
  }
  if (!c.boundary.empty()) {
    os << "\n[boundary]\n";
    for (const auto& [tag, kind] : c.boundary) os << tag << " = " << to_string(kind) << "\n";
  }

  const MaterialSpec& m = c.material;
  os << "\n[material]\nlaw = " << m.law << "\nrho = " << fmt(m.rho) << "\n";
  if (law_is_preset(m.law)) {
    os << "K1 = " << fmt(m.K1) << "\nG1 = " << fmt(m.G1) << "\ngc = " << fmt(m.gc) << "\neps_pf = " << fmt(m.eps_pf)
       << "\neps0 = " << fmt(m.eps0) << "\n";
  } else {
    os << "K = " << m.K.to_string() << "\nG = " << m.G.to_string() << "\nphi = " << m.phi.to_string()
       << "\ngc = " << fmt(m.gc) << "\n";
  }
  if (m.kappa) os << "kappa = " << fmt(*m.kappa) << "\n";
  os << "p_grad = " << fmt(m.p_grad) << "\nnu_visc = " << fmt(m.nu_visc) << "\nD0_K = " << fmt(m.D0_K)
     << "\nD0_G = " << fmt(m.D0_G) << "\nchi = " << fmt(m.chi) << "\neps_reg = " << fmt(m.eps_reg)
     << "\nregime = " << to_string(m.regime) << "\nalpha_eval = " << to_string(m.alpha_eval) << "\n";

  if (c.plasticity) {
    const PlasticSpec& p = *c.plasticity;
    os << "\n[plasticity]\nH = " << fmt(p.H) << "\nG_nh = " << fmt(p.G_nh) << "\nkappa1 = " << fmt(p.kappa1)
       << "\nsigma_yld = " << p.sigma_yld.to_string() << "\n";
  }

  const SchemeConfig& s = c.scheme;
  os << "\n[scheme]\nscheme = " << to_string(s.scheme) << "\ntau = " << fmt(s.tau) << "\nsteps = " << c.steps
     << "\nnewton_tol = " << fmt(s.newton_tol) << "\nqp_tol = " << fmt(s.qp_tol)
     << "\nmax_inner_iters = " << s.max_inner_iters << "\ncfl_safety = " << fmt(s.cfl_safety)
     << "\nlumped = " << (s.lumped ? "true" : "false") << "\nlinear_solver = " << to_string(s.linear_solver)
     << "\nlinear_tol = " << fmt(s.linear_tol) << "\n";

  for (const auto& l : c.loads) {
    os << "\n[load." << l.name << "]\nkind = " << (l.traction ? "traction" : "body") << "\n";
    if (l.traction) os << "tag = " << l.tag << "\n";
    os << "gx = " << fmt(l.gx) << "\ngy = " << fmt(l.gy) << "\n";
    if (l.time_poly) {
      os << "time = " << l.time_poly->to_string() << "\n";
    } else {
      os << "schedule = ";
      for (std::size_t i = 0; i < l.schedule.size(); ++i)
        os << (i ? ", " : "") << fmt(l.schedule[i].first) << " " << fmt(l.schedule[i].second);
      os << "\n";
    }
  }

  const InitialSpec& ic = c.initial;
  os << "\n[initial]\nux = " << ic.ux.to_string() << "\nuy = " << ic.uy.to_string() << "\nvx = " << ic.vx.to_string()
     << "\nvy = " << ic.vy.to_string() << "\nalpha = " << ic.alpha.to_string() << "\n";

  const OutputSpec& o = c.output;
  os << "\n[output]\ndir = " << o.dir << "\ncadence = " << o.cadence << "\nvtk = " << (o.vtk ? "true" : "false")
     << "\ncsv = " << o.csv << "\nprefix = " << o.prefix << "\n";
  return os.str();
}

Mesh2D build_mesh(const RunConfig& c, const std::string& base_dir) {
  Mesh2D mesh = [&] {
    if (c.mesh.file.empty()) return generate_rect_mesh(c.mesh.nx, c.mesh.ny, c.mesh.Lx, c.mesh.Ly);
    std::filesystem::path p(c.mesh.file);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return read_mesh_file(p.string());
  }();
  for (const auto& [tag, kind] : c.boundary) mesh = mesh.with_tag_kind(tag, kind);
  // Loaded tags act as traction boundaries unless configured otherwise.
  for (const auto& l : c.loads)
    if (l.traction && !c.boundary.count(l.tag)) mesh = mesh.with_tag_kind(l.tag, BoundaryKind::Traction);
  return mesh;
}

MaterialLaw build_material(const RunConfig& c) {
  const MaterialSpec& m = c.material;
  const LawKind kind = law_kind_from_string(m.law);
  MaterialLaw law;
  if (kind == LawKind::AT1 || kind == LawKind::AT2) {
    law = make_phase_field_law(kind, m.rho, IsoTensor{m.K1, m.G1}, m.gc, m.eps_pf, m.eps0);
  } else {
    law.kind = kind;
    law.rho = m.rho;
    law.K_fun = m.K.to_polynomial("a");
    law.G_fun = m.G.to_polynomial("a");
    law.phi_fun = m.phi.to_polynomial("a");
    law.gc = m.gc;
  }
  if (m.kappa) law.kappa = *m.kappa;
  law.p_grad = m.p_grad;
  law.nu_visc = m.nu_visc;
  law.D0 = IsoTensor{m.D0_K, m.D0_G};
  law.chi = m.chi;
  law.eps_reg = m.eps_reg;
  law.regime = m.regime;
  return law;
}

std::optional<PlasticLaw> build_plastic(const RunConfig& c) {
  if (!c.plasticity) return std::nullopt;
  PlasticLaw p;
  p.H = c.plasticity->H;
  p.G_nh = c.plasticity->G_nh;
  p.kappa1 = c.plasticity->kappa1;
  p.sigma_yld_fun = c.plasticity->sigma_yld.to_polynomial("a");
  return p;
}

LoadProgram build_loads(const RunConfig& c, const Mesh2D& mesh) {
  LoadProgram lp;
  for (const auto& l : c.loads) {
    if (l.traction) {
      if (mesh.find_tag(l.tag) < 0) throw ConfigError({"load '" + l.name + "': unknown tag '" + l.tag + "'"});
      lp.traction.push_back({l.tag, Eigen::Vector2d(l.gx, l.gy), l.time_function()});
    } else {
      lp.body.push_back({Eigen::Vector2d(l.gx, l.gy), l.time_function()});
    }
  }
  return lp;
}

}  // namespace pfd
