#include "duhamel/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace duhamel {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownInequalities = {
    "thm2.7", "thm2.8", "thm2.9",  "cor3.1a", "cor3.1b", "cor3.1c",
    "cor3.1d", "cor3.1e", "kato",  "expbound", "cor4.3c"};

bool needs_dual(const std::string& id) {
  return id == "thm2.9" || id == "cor3.1a" || id == "cor3.1b" || id == "cor3.1e" ||
         id == "expbound" || id == "cor4.3c";
}

std::vector<std::pair<double, double>> load_table_csv(const std::string& path,
                                                      std::vector<std::string>& errors) {
  std::vector<std::pair<double, double>> rows;
  std::ifstream is(path);
  if (!is) {
    errors.push_back("measure table file not readable: " + path);
    return rows;
  }
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      errors.push_back("measure table row without comma: " + line);
      return rows;
    }
    try {
      rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      errors.push_back("measure table row not numeric: " + line);
      return rows;
    }
  }
  return rows;
}

void merge_measure(const json& j, MeasureDescription& m, const std::string& base_dir,
                   std::vector<std::string>& errors) {
  m.kind = j.value("kind", m.kind);
  m.alpha = j.value("alpha", m.alpha);
  m.lambda = j.value("lambda", m.lambda);
  m.c = j.value("c", m.c);
  m.decay_rate = j.value("decay_rate", m.decay_rate);
  if (j.contains("atoms")) {
    m.atoms.clear();
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) {
        errors.push_back("measure atoms must be [offset, weight] pairs");
        continue;
      }
      m.atoms.push_back(Atom{a[0].get<double>(), a[1].get<double>()});
    }
  }
  if (j.contains("file")) {
    std::string path = j.at("file").get<std::string>();
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    const auto rows = load_table_csv(path, errors);
    m.nodes.clear();
    m.densities.clear();
    for (const auto& [z, d] : rows) {
      m.nodes.push_back(z);
      m.densities.push_back(d);
    }
  }
}

void validate(const RunConfig& cfg, std::vector<std::string>& errors) {
  const ScenarioDescription& d = cfg.scenario;
  if (!(d.x_min < d.x_max)) errors.push_back("grid: x_min must be below x_max");
  if (d.n < 2) errors.push_back("grid: n must be at least 2");
  if (!(d.horizon > 0.0)) errors.push_back("horizon must be positive");
  if (cfg.threads < 1) errors.push_back("threads must be at least 1");

  const double h = (d.x_max - d.x_min) / std::max(d.n, 2);
  if (d.split_r != 0.0 && d.split_r < h)
    errors.push_back("split_r below one cell width (SplitTooSmall)");

  for (double t : d.verify_times)
    if (!(t > 0.0 && t <= d.horizon + 1e-12))
      errors.push_back("verify time outside (0, horizon]");

  for (const std::string& id : d.inequalities)
    if (!kKnownInequalities.count(id)) errors.push_back("unknown inequality id: " + id);

  const bool nonlocal = d.op_kind == "nonlocal";
  if (d.op_kind != "laplacian" && d.op_kind != "nonlocal")
    errors.push_back("operator must be laplacian or nonlocal");

  if (nonlocal) {
    const MeasureDescription& m = d.measure;
    if (m.kind == "stable" || m.kind == "stable-fractional" || m.kind == "tempered") {
      if (!(m.alpha > 0.0 && m.alpha < 2.0)) errors.push_back("measure alpha out of (0,2)");
    }
    if (m.kind == "stable" && !(m.c > 0.0)) errors.push_back("measure c must be positive");
    if (m.kind == "tempered" && !(m.lambda > 0.0 && m.c > 0.0))
      errors.push_back("tempered measure needs positive lambda and c");
    if (m.kind == "atomic") {
      if (m.atoms.empty()) errors.push_back("atomic measure needs atoms");
      for (const Atom& a : m.atoms) {
        if (a.offset == 0.0) errors.push_back("atomic measure: atom at the origin");
        if (!(a.weight > 0.0)) errors.push_back("atomic measure: weights must be positive");
      }
    }
    if (m.kind == "table") {
      if (m.nodes.size() < 2) errors.push_back("table measure needs at least two rows");
      for (std::size_t i = 0; i + 1 < m.nodes.size(); ++i)
        if (!(m.nodes[i] < m.nodes[i + 1])) {
          errors.push_back("table measure nodes must increase strictly");
          break;
        }
      if (!(m.decay_rate >= 0.0)) errors.push_back("table decay_rate must be nonnegative");
    }
    if (m.kind != "stable" && m.kind != "stable-fractional" && m.kind != "tempered" &&
        m.kind != "atomic" && m.kind != "table")
      errors.push_back("unknown measure kind: " + m.kind);

    // The partial Duhamel family needs a measure with a finite exponential
    // moment at some positive rate.
    const bool heavy = m.kind == "stable" || m.kind == "stable-fractional";
    for (const std::string& id : d.inequalities)
      if (heavy && needs_dual(id))
        errors.push_back(id + " needs a tempered measure (finite exponential moment), "
                              "a plain stable one has none");
    if (m.kind == "tempered" && d.dual.exp_rate > m.lambda)
      errors.push_back("dual exp_rate exceeds the tempering rate lambda");
  }

  if (std::find(d.inequalities.begin(), d.inequalities.end(), std::string("thm2.8")) !=
      d.inequalities.end()) {
    if (!(d.alpha > 0.0 && d.alpha <= 2.0)) errors.push_back("alpha out of (0,2]");
    if ((d.alpha == 2.0) != (d.op_kind == "laplacian"))
      errors.push_back("thm2.8: alpha = 2 pairs with laplacian, alpha < 2 with a stable measure");
    if (d.phi_kind != "identity") errors.push_back("thm2.8 needs phi = identity");
  }

  // Ball containment, with the inequality-specific enlargement. Lipschitz
  // constants are certified from the description alone.
  double src_budget = 0.0;
  for (const SourceDescription* s : {&d.source_u, &d.source_v}) {
    if (s->kind == "constant") src_budget = std::max(src_budget, std::abs(s->amp) * d.horizon);
    if (s->kind == "bump") src_budget = std::max(src_budget, std::abs(s->amp) * d.horizon);
  }
  const double lo = d.base - src_budget;
  const double hi = d.base + d.data_bump.height + src_budget;
  double L_f = 0.0;
  try {
    FluxSpec fl = d.flux_kind == "linear" ? FluxSpec::linear(d.flux_a) : FluxSpec::burgers();
    L_f = fl.lipschitz_on(lo, hi);
  } catch (const Error&) {
    errors.push_back("unable to certify a flux Lipschitz constant");
  }
  for (const Ball& b : d.balls) {
    if (!(b.radius > 0.0)) errors.push_back("ball radius must be positive");
    for (double t : d.verify_times) {
      double enlarge = b.radius + L_f * t;
      for (const std::string& id : d.inequalities)
        if (needs_dual(id) || id == "thm2.9") enlarge = b.radius + 1.0 + L_f * t;
      if (b.center - enlarge < d.x_min || b.center + enlarge > d.x_max)
        errors.push_back("enlarged ball exceeds the domain (BallExceedsDomain)");
    }
  }

  const bool dual_needed =
      std::any_of(d.inequalities.begin(), d.inequalities.end(), needs_dual);
  if (dual_needed) {
    if (d.dual.bump.mass() < 1.0 - 1e-9)
      errors.push_back("dual bump mass must be at least one for the ball enlargement by 1");
    if (std::abs(d.dual.bump.center) + d.dual.bump.radius >= 1.0)
      errors.push_back("dual bump support must sit inside the unit ball");
    if (!(d.dual.delta > 0.0 && d.dual.epsilon > 0.0 && d.dual.epsilon < 1.0))
      errors.push_back("dual mollifier scales need delta > 0 and epsilon in (0,1)");
    if (d.dual.n_snapshots < 2) errors.push_back("dual needs at least two snapshots");
  }
}

RunConfig config_from_json(const json& j, const std::string& base_dir) {
  std::vector<std::string> errors;
  RunConfig cfg;
  ScenarioDescription& d = cfg.scenario;

  try {
    if (j.contains("preset")) d = preset_description(j.at("preset").get<std::string>());
  } catch (const Error& e) {
    errors.push_back(e.what());
  }

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    d.x_min = g.value("x_min", d.x_min);
    d.x_max = g.value("x_max", d.x_max);
    d.n = g.value("n", d.n);
  }
  d.horizon = j.value("horizon", d.horizon);
  d.split_r = j.value("split_r", d.split_r);
  if (j.contains("verify_times")) d.verify_times = j.at("verify_times").get<std::vector<double>>();
  if (j.contains("balls")) {
    d.balls.clear();
    for (const auto& b : j.at("balls")) {
      if (b.is_array() && b.size() == 2)
        d.balls.push_back(Ball{b[0].get<double>(), b[1].get<double>()});
      else
        errors.push_back("balls must be [center, radius] pairs");
    }
  }
  if (j.contains("inequalities"))
    d.inequalities = j.at("inequalities").get<std::vector<std::string>>();
  d.seed = j.value("seed", d.seed);
  d.n_test_functions = j.value("n_random_test_functions", d.n_test_functions);
  d.alpha = j.value("alpha", d.alpha);

  if (j.contains("flux")) {
    d.flux_kind = j.at("flux").value("kind", d.flux_kind);
    d.flux_a = j.at("flux").value("a", d.flux_a);
  }
  if (j.contains("phi")) {
    d.phi_kind = j.at("phi").value("kind", d.phi_kind);
    d.phi_m = j.at("phi").value("m", d.phi_m);
    d.phi_a = j.at("phi").value("a", d.phi_a);
    d.phi_b = j.at("phi").value("b", d.phi_b);
  }
  if (j.contains("operator")) d.op_kind = j.at("operator").get<std::string>();
  if (j.contains("measure")) {
    if (!j.contains("operator")) d.op_kind = "nonlocal";
    merge_measure(j.at("measure"), d.measure, base_dir, errors);
  }
  if (j.contains("initial")) {
    const auto& i = j.at("initial");
    d.base = i.value("base", d.base);
    d.data_bump.center = i.value("center", d.data_bump.center);
    d.data_bump.radius = i.value("radius", d.data_bump.radius);
    d.data_bump.height = i.value("height", d.data_bump.height);
  }
  auto merge_source = [&](const char* key, SourceDescription& s) {
    if (!j.contains(key)) return;
    const auto& js = j.at(key);
    s.kind = js.value("kind", s.kind);
    s.amp = js.value("amp", s.amp);
    s.xc = js.value("xc", s.xc);
    s.xw = js.value("xw", s.xw);
    s.tc = js.value("tc", s.tc);
    s.tw = js.value("tw", s.tw);
  };
  merge_source("source_u", d.source_u);
  merge_source("source_v", d.source_v);

  if (j.contains("dual")) {
    const auto& jd = j.at("dual");
    d.dual.bump.center = jd.value("center", d.dual.bump.center);
    d.dual.bump.radius = jd.value("radius", d.dual.bump.radius);
    d.dual.bump.height = jd.value("height", d.dual.bump.height);
    d.dual.n_snapshots = jd.value("snapshots", d.dual.n_snapshots);
    d.dual.delta = jd.value("delta", d.dual.delta);
    d.dual.epsilon = jd.value("epsilon", d.dual.epsilon);
    d.dual.exp_rate = jd.value("exp_rate", d.dual.exp_rate);
    d.dual.reach = jd.value("reach", d.dual.reach);
  }
  if (j.contains("kernel")) {
    const auto& jk = j.at("kernel");
    cfg.kernel_alpha = jk.value("alpha", cfg.kernel_alpha);
    cfg.kernel_t = jk.value("t", cfg.kernel_t);
    cfg.kernel_widen = jk.value("widen", cfg.kernel_widen);
    if (!(cfg.kernel_alpha > 0.0 && cfg.kernel_alpha <= 2.0))
      errors.push_back("kernel alpha out of (0,2]");
    if (!(cfg.kernel_t > 0.0)) errors.push_back("kernel t must be positive");
  }

  cfg.out_dir = j.value("out", cfg.out_dir);
  cfg.threads = j.value("threads", cfg.threads);
  if (j.contains("sweep_ns")) cfg.sweep_ns = j.at("sweep_ns").get<std::vector<int>>();
  for (std::size_t i = 1; i < cfg.sweep_ns.size(); ++i)
    if (cfg.sweep_ns[i] <= cfg.sweep_ns[i - 1]) {
      errors.push_back("sweep_ns must increase strictly");
      break;
    }

  validate(cfg, errors);
  if (!errors.empty()) {
    std::ostringstream os;
    os << errors.size() << " configuration error(s):";
    for (const std::string& e : errors) os << "\n  - " << e;
    fail(Errc::config_error, os.str());
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::config_error, "cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    fail(Errc::config_error, std::string("config parse error: ") + e.what());
  }
  std::string dir = ".";
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return config_from_json(j, dir);
}

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(Errc::config_error, std::string("config parse error: ") + e.what());
  }
  return config_from_json(j, base_dir);
}

}  // namespace duhamel
