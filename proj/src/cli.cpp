#include "qkq/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkq/curvature.hpp"
#include "qkq/error.hpp"

namespace qkq::cli {

using json = nlohmann::ordered_json;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Degenerate: return Empty;
    case ErrorKind::Dimension:
    case ErrorKind::ChartDomain:
    case ErrorKind::Domain:
    case ErrorKind::Contract:
    case ErrorKind::Parameter:
    case ErrorKind::Branch: return InputError;
    default: return ThresholdFail;
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
    if (used != tok.size()) throw Error(ErrorKind::Parameter, "not a number: '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

GeneratorForm parse_form_literal(const std::string& s) {
  static const std::regex re(R"(\s*(~?)\s*(T0Diag|T0Split|T1|T2)\s*\(([^)]*)\)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw Error(ErrorKind::Parameter, "cannot parse form literal '" + s + "'");
  const Basis b = m[1].length() ? Basis::VTilde : Basis::U;
  const std::string name = m[2];
  const auto a = parse_list(m[3]);
  auto need = [&](std::size_t n) {
    if (a.size() != n) throw Error(ErrorKind::Parameter, name + " takes " + std::to_string(n) + " arguments");
  };
  if (name == "T0Diag") {
    need(3);
    if (b == Basis::VTilde) throw Error(ErrorKind::Parameter, "T0Diag has no tilde variant");
    return GeneratorForm::t0diag(a[0], a[1], a[2]);
  }
  if (name == "T0Split") {
    need(3);
    return GeneratorForm::t0split(a[0], a[1], a[2], b);
  }
  if (name == "T1") {
    need(3);
    return GeneratorForm::t1(a[0], a[1], a[2], b);
  }
  need(2);
  return GeneratorForm::t2(a[0], a[1], b);
}

HMatrix3 parse_matrix_json(const std::string& s) {
  json j;
  try {
    j = json::parse(s);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parameter, std::string("malformed matrix JSON: ") + e.what());
  }
  auto bad = [] { return Error(ErrorKind::Parameter, "matrix must be a 3x3 array of [w,x,y,z] quaternions"); };
  if (!j.is_array() || j.size() != 3) throw bad();
  HMatrix3 M;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw bad();
    for (int c = 0; c < 3; ++c) {
      const auto& q = j[r][c];
      if (!q.is_array() || q.size() != 4) throw bad();
      for (const auto& x : q)
        if (!x.is_number()) throw bad();
      M(r, c) = Quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
    }
  }
  return M;
}

PoleSet parse_poles(const std::string& s) {
  PoleSet ps;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, ';')) {
    if (term.empty()) continue;
    const auto colon = term.find(':');
    const std::string kind = term.substr(0, colon);
    const auto a = colon == std::string::npos ? std::vector<double>{} : parse_list(term.substr(colon + 1));
    if (kind == "mono" || kind == "monopole") {
      if (a.size() < 2 || a.size() > 3) throw Error(ErrorKind::Parameter, "mono takes a,b[,charge]");
      ps.real_poles.push_back({a[0], a[1], a.size() == 3 && a[2] < 0 ? -1 : 1});
    } else if (kind == "pedersen") {
      if (a.size() != 3) throw Error(ErrorKind::Parameter, "pedersen takes a,b,c");
      ps.complex_pair = ComplexPair{a[0], a[1], a[2]};
    } else if (kind == "dipole") {
      ps.dipole += a.empty() ? 1.0 : a[0];
    } else if (kind == "tripole") {
      ps.tripole += a.empty() ? 1.0 : a[0];
    } else {
      throw Error(ErrorKind::Parameter, "unknown pole term '" + kind + "'");
    }
  }
  if (ps.empty()) throw Error(ErrorKind::Parameter, "empty pole set");
  return ps;
}

std::vector<Axis> parse_grid(const std::string& s) {
  std::vector<Axis> axes;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::vector<std::string> parts;
    std::stringstream ts(tok);
    std::string p;
    while (std::getline(ts, p, ':')) parts.push_back(p);
    try {
      if (parts.size() == 3) {
        Axis a{std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2])};
        if (a.n < 1) throw Error(ErrorKind::Parameter, "grid counts must be >= 1");
        axes.push_back(a);
      } else if (parts.size() == 1) {
        const int n = std::stoi(parts[0]);
        if (n < 1) throw Error(ErrorKind::Parameter, "grid counts must be >= 1");
        axes.push_back({0, 0, n});
      } else {
        throw Error(ErrorKind::Parameter, "grid axis must be lo:hi:n or n");
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parameter, "cannot parse grid '" + s + "'");
    }
  }
  return axes;
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* e = std::getenv("QKQ_THREADS")) {
    const int cap = std::atoi(e);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

struct Config {
  std::string family;
  std::string params;
  std::string grid;
  double h = 1e-3;
  std::uint64_t seed = 1;
  double tol = -1;  // command default when negative
  std::string out;
  std::string format = "json";
  std::string config;
  // command specific
  std::string matrix, form, basis = "u", point, xi, poles;
  int samples = -1;
  int max_weight = 5;
};

json quat_json(const Quat& q) { return json::array({q.w, q.x, q.y, q.z}); }

json hvec_json(const HVector& u) {
  json a = json::array();
  for (const auto& q : u.c) a.push_back(quat_json(q));
  return a;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_json(const Eigen::MatrixXd& M) {
  json a = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) a.push_back(vec_json(M.row(r).transpose()));
  return a;
}

json roots_json(const std::vector<std::complex<double>>& r) {
  json a = json::array();
  for (const auto& z : r) a.push_back(json::array({z.real(), z.imag()}));
  return a;
}

std::string g17(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// Tabular output: header + rows, rendered as JSON records or CSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  json records() const {
    json a = json::array();
    for (const auto& r : rows) {
      json o;
      for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
      a.push_back(o);
    }
    return a;
  }
  void csv(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << g17(r[i]);
      os << "\n";
    }
  }
};

struct Output {
  json doc;
  Table table;  // CSV body
};

void emit(const Config& cfg, const Output& o, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw Error(ErrorKind::Parameter, "cannot open output file '" + cfg.out + "'");
    os = &file;
  }
  if (cfg.format == "csv") {
    if (o.table.header.empty()) {
      // single-record commands: flatten the summary
      Table t;
      std::vector<double> row;
      for (const auto& [k, v] : o.doc["summary"].items())
        if (v.is_number()) {
          t.header.push_back(k);
          row.push_back(v.get<double>());
        }
      t.rows.push_back(row);
      t.csv(*os);
    } else {
      o.table.csv(*os);
    }
  } else {
    *os << o.doc.dump(2) << "\n";
  }
}

std::vector<double> need_params(const Config& cfg, const char* what) {
  if (cfg.params.empty()) throw Error(ErrorKind::Parameter, std::string("--params is required for ") + what);
  return parse_list(cfg.params);
}

json config_json(const Config& c, const std::string& cmd) {
  json j;
  j["command"] = cmd;
  if (!c.family.empty()) j["family"] = c.family;
  if (!c.params.empty()) j["params"] = parse_list(c.params);
  if (!c.grid.empty()) j["grid"] = c.grid;
  j["h"] = c.h;
  j["seed"] = c.seed;
  if (c.tol > 0) j["tol"] = c.tol;
  return j;
}

// ---- commands

int cmd_classify(const Config& cfg, Output& o) {
  Sp12Element el;
  json in;
  if (!cfg.form.empty()) {
    el = make_normal_form(parse_form_literal(cfg.form));
    in = cfg.form;
  } else if (!cfg.matrix.empty()) {
    Basis b = cfg.basis == "vtilde" ? Basis::VTilde : Basis::U;
    if (cfg.basis != "u" && cfg.basis != "vtilde") throw Error(ErrorKind::Parameter, "--basis must be u or vtilde");
    HMatrix3 M = parse_matrix_json(cfg.matrix);
    if (!is_sp12(M, 1e-9, b)) throw Error(ErrorKind::Parameter, "matrix is not in sp(1,2)");
    el = make_element(M, b);
    in = json::parse(cfg.matrix);
  } else {
    throw Error(ErrorKind::Parameter, "classify needs --form or --matrix");
  }
  const GeneratorForm f = classify(el);
  const BryantCase bc = bryant_case(f);
  std::string bryant = to_string(bc.id);
  const std::string line = to_string(f) + ", height " + std::to_string(el.height) + ", Bryant " + bryant;
  o.doc["input"] = in;
  o.doc["summary"] = {{"normalForm", to_string(f)},
                      {"family", to_string(f.family)},
                      {"height", el.height},
                      {"bryant", bryant},
                      {"Pc", roots_json(bc.Pc)},
                      {"Pm", roots_json(bc.Pm)},
                      {"text", line}};
  return Pass;
}

// Analytic emptiness for the sampled families.
void check_nonempty(MomentFamily f, const std::vector<double>& pr) {
  if (f == MomentFamily::Weighted && pr.size() == 3) {
    WeightTriple w = WeightTriple::make(int(pr[0]), int(pr[1]), int(pr[2]));
    if (!zeroset_nonempty(w)) throw Error(ErrorKind::Degenerate, "zero set empty: max(|p1/p0|,|p2/p0|) <= 1");
  }
  if (f == MomentFamily::HeightOne && pr.size() == 2 && pr[0] >= std::abs(pr[1]))
    throw Error(ErrorKind::Degenerate, "zero set empty: p >= |q|");
}

int cmd_moment(const Config& cfg, Output& o) {
  if (cfg.family.empty()) throw Error(ErrorKind::Parameter, "--family is required");
  const MomentFamily f = moment_family_from_string(cfg.family);
  const auto pr = need_params(cfg, "moment");
  const FamilyGenerator g = family_generator(f, pr);
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-10;
  o.table.header = {"index", "muNorm", "form"};
  json pts = json::array();
  double worst = 0;
  auto record = [&](const HVector& u, int i) {
    const double r = mu_raw(g.M, u).norm();
    worst = std::max(worst, r);
    pts.push_back({{"u", hvec_json(u)}, {"basis", to_string(u.basis)}, {"muNorm", r}, {"form", form_value(u)}});
    o.table.rows.push_back({double(i), r, form_value(u)});
  };
  if (!cfg.point.empty()) {
    json j;
    try {
      j = json::parse(cfg.point);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parameter, std::string("malformed point JSON: ") + e.what());
    }
    if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::Parameter, "--point must be 3 quaternions");
    HVector u{g.k, g.l, {}, g.basis};
    for (const auto& q : j) {
      if (!q.is_array() || q.size() != 4) throw Error(ErrorKind::Parameter, "--point must be 3 quaternions");
      u.c.emplace_back(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
    }
    record(u, 0);
    o.doc["points"] = pts;
    o.doc["summary"] = {{"maxMuNorm", worst}, {"zero", worst < tol}};
    return Pass;
  }
  check_nonempty(f, pr);
  SampleOptions opt;
  opt.count = cfg.samples > 0 ? cfg.samples : 5;
  const auto s = zeroset_sample(f, pr, cfg.seed, opt);
  for (std::size_t i = 0; i < s.size(); ++i) record(s[i], int(i));
  o.doc["points"] = pts;
  o.doc["summary"] = {{"count", s.size()}, {"maxMuNorm", worst}};
  return worst < tol ? Pass : ThresholdFail;
}

QuotientChart chart_from(const Config& cfg) {
  if (cfg.family.empty()) throw Error(ErrorKind::Parameter, "--family is required");
  return make_chart(slice_family_from_string(cfg.family), need_params(cfg, cfg.family.c_str()));
}

int cmd_slice(const Config& cfg, Output& o) {
  const QuotientChart c = chart_from(cfg);
  Eigen::Vector4d xi = c.center;
  if (!cfg.xi.empty()) {
    const auto v = parse_list(cfg.xi);
    if (v.size() != 4) throw Error(ErrorKind::Parameter, "--xi takes 4 numbers");
    xi = Eigen::Vector4d(v[0], v[1], v[2], v[3]);
  }
  std::string why;
  if (!in_domain(c, xi, &why)) throw Error(ErrorKind::Domain, "xi outside the slice: " + why);
  const HVector u = embed_u(c, xi);
  const ChartPoint y = embed_native(c, xi);
  const MetricSample ms = quotient_metric(c, xi, cfg.h);
  const double mu = f_inhomog(c.moment_family, c.params, y).norm();
  json yj = json::array();
  for (const auto& q : y.x) yj.push_back(quat_json(q));
  o.doc["chart"] = c.name();
  o.doc["summary"] = {{"xi", vec_json(xi)}, {"u", hvec_json(u)},      {"native", yj},
                      {"muNorm", mu},      {"gVV", ms.gVV},          {"G", mat_json(ms.G)},
                      {"center", vec_json(c.center)}, {"halfwidth", vec_json(c.halfwidth)}};
  return Pass;
}

Grid grid_from(const Config& cfg, const QuotientChart& c) {
  if (cfg.grid.empty()) return default_grid(c, 3);
  const auto axes = parse_grid(cfg.grid);
  if (axes.size() == 1 && axes[0].lo == axes[0].hi) return default_grid(c, axes[0].n);
  if (axes.size() != 4) throw Error(ErrorKind::Parameter, "verify-sde grid needs 4 axes or a single count");
  Grid g;
  for (int a = 0; a < 4; ++a) {
    g.lo[a] = axes[a].lo;
    g.hi[a] = axes[a].hi;
    g.n[a] = axes[a].n;
  }
  return g;
}

int cmd_verify_sde(const Config& cfg, Output& o) {
  const QuotientChart c = chart_from(cfg);
  const Grid g = grid_from(cfg, c);
  Thresholds th;
  if (cfg.tol > 0) th.einstein = cfg.tol;
  const auto reports = curvature_grid(c, g, cfg.h, worker_threads(), th);
  const GridSummary s = summarize(reports, th);
  json pts = json::array();
  o.table.header = {"xi0", "xi1", "xi2", "xi3", "scalar", "einsteinResidual", "weylSDnorm", "weylASDnorm"};
  for (const auto& r : reports) {
    pts.push_back({{"xi", vec_json(r.xi)},
                   {"scalar", r.scalar},
                   {"einsteinResidual", r.einstein_residual},
                   {"weylSDnorm", r.weyl_sd},
                   {"weylASDnorm", r.weyl_asd},
                   {"riemNorm", r.riem_norm},
                   {"constantCurvature", r.constant_curvature},
                   {"vanishing", to_string(r.vanishing)},
                   {"verdict", to_string(r.verdict)}});
    o.table.rows.push_back({r.xi[0], r.xi[1], r.xi[2], r.xi[3], r.scalar, r.einstein_residual, r.weyl_sd, r.weyl_asd});
  }
  o.doc["chart"] = c.name();
  o.doc["points"] = pts;
  o.doc["summary"] = {{"count", reports.size()},
                      {"maxEinsteinResidual", s.max_einstein},
                      {"scalarMin", s.scalar_min},
                      {"scalarMax", s.scalar_max},
                      {"scalarVariation", s.scalar_variation},
                      {"maxWeylRatio", s.max_weyl_ratio},
                      {"constantCurvature", s.constant_curvature},
                      {"spectralDeviation", s.max_spectral_deviation},
                      {"orientationConsistent", s.orientation_consistent},
                      {"vanishingHalf", to_string(s.vanishing)},
                      {"verdict", to_string(s.verdict)}};
  return s.verdict == Verdict::Failed ? ThresholdFail : Pass;
}

int cmd_eigen(const Config& cfg, Output& o) {
  PoleSet ps;
  if (!cfg.poles.empty()) ps = parse_poles(cfg.poles);
  else if (!cfg.family.empty())
    ps = eigenfunction_of_quotient(torus_family_from_string(cfg.family), need_params(cfg, "eigen"));
  else
    throw Error(ErrorKind::Parameter, "eigen needs --poles or --family/--params");
  std::vector<Axis> ax = cfg.grid.empty() ? std::vector<Axis>{{0.1, 2, 50}, {-1, 1, 50}} : parse_grid(cfg.grid);
  if (ax.size() != 2) throw Error(ErrorKind::Parameter, "eigen grid needs rho and eta axes");
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-8;
  o.table.header = {"rho", "eta", "F", "laplaceResidual"};
  double worst = 0;
  int skipped = 0;
  auto at = [](const Axis& a, int i) { return a.n == 1 ? 0.5 * (a.lo + a.hi) : a.lo + (a.hi - a.lo) * i / (a.n - 1); };
  for (int i = 0; i < ax[0].n; ++i)
    for (int j = 0; j < ax[1].n; ++j) {
      const HalfPlanePoint p{at(ax[0], i), at(ax[1], j)};
      if (singular_distance(ps, p) < 1e-2) {
        ++skipped;
        continue;
      }
      try {
        const double F = eval_F(ps, p), r = laplace_check(ps, p);
        worst = std::max(worst, r);
        o.table.rows.push_back({p.rho, p.eta, F, r});
      } catch (const Error&) {
        ++skipped;
      }
    }
  o.doc["poles"] = ps.describe();
  o.doc["points"] = o.table.records();
  o.doc["summary"] = {{"count", o.table.rows.size()}, {"skipped", skipped}, {"maxResidual", worst}, {"tol", tol}};
  return worst < tol ? Pass : ThresholdFail;
}

int cmd_pullback(const Config& cfg, Output& o) {
  if (cfg.family.empty()) throw Error(ErrorKind::Parameter, "--family is required");
  const TorusFamily f = torus_family_from_string(cfg.family);
  const auto pr = need_params(cfg, "pullback");
  const MomentFamily mf = moment_family_from_string(moment_family_name(f));
  check_nonempty(mf, pr);
  SampleOptions opt;
  opt.count = cfg.samples > 0 ? cfg.samples : 50;
  const auto s = zeroset_sample(mf, pr, cfg.seed, opt);
  const PullbackResult r = pullback_check(f, pr, s);
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
  o.doc["poles"] = eigenfunction_of_quotient(f, pr).describe();
  o.doc["summary"] = {{"samples", s.size()},         {"used", r.used},
                      {"skipped", r.skipped},        {"meanRatio", r.mean_ratio},
                      {"deviation", r.deviation},    {"maxLsqResidual", r.max_lsq_residual},
                      {"tol", tol}};
  return r.deviation < tol ? Pass : ThresholdFail;
}

int cmd_bergman(const Config& cfg, Output& o) {
  auto one = [&](const WeightTriple& w) {
    const BergmanVerdict v = bergman_smooth(w);
    return json{{"weights", w.array()},
                {"verdict", v.verdict == Smoothness::Smooth ? "Smooth" : "Orbifold"},
                {"witnessOrder", v.witness_order},
                {"directOrder", v.direct_order},
                {"locus", v.locus}};
  };
  o.table.header = {"p0", "p1", "p2", "smooth", "witnessOrder", "directOrder"};
  auto row = [&](const json& j) {
    o.table.rows.push_back({j["weights"][0].get<double>(), j["weights"][1].get<double>(),
                            j["weights"][2].get<double>(), j["verdict"] == "Smooth" ? 1.0 : 0.0,
                            j["witnessOrder"].get<double>(), j["directOrder"].get<double>()});
  };
  if (!cfg.params.empty()) {
    const auto p = parse_list(cfg.params);
    if (p.size() != 3) throw Error(ErrorKind::Parameter, "bergman takes three weights");
    const json j = one(WeightTriple::make(int(p[0]), int(p[1]), int(p[2])));
    row(j);
    o.doc["summary"] = j;
    return Pass;
  }
  json all = json::array();
  int smooth = 0;
  bool rigid = true;
  for (int a = 1; a <= cfg.max_weight; ++a)
    for (int b = 1; b <= cfg.max_weight; ++b)
      for (int c = 1; c <= cfg.max_weight; ++c) {
        if (std::gcd(std::gcd(a, b), c) != 1) continue;
        const json j = one(WeightTriple::make(a, b, c));
        const bool sm = j["verdict"] == "Smooth";
        smooth += sm;
        if (sm != (a == 1 && b == 1 && c == 1)) rigid = false;
        row(j);
        all.push_back(j);
      }
  o.doc["points"] = all;
  o.doc["summary"] = {{"count", all.size()}, {"smooth", smooth}, {"rigid", rigid}};
  return rigid ? Pass : ThresholdFail;
}

void apply_config_file(Config& c, CLI::App& sub) {
  if (c.config.empty()) return;
  std::ifstream f(c.config);
  if (!f) throw Error(ErrorKind::Parameter, "cannot read config '" + c.config + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parameter, std::string("malformed config JSON: ") + e.what());
  }
  auto given = [&](const char* name) {
    auto* opt = sub.get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  auto list_or_string = [](const json& v) {
    if (!v.is_array()) return v.get<std::string>();
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + g17(v[i].get<double>());
    return s;
  };
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "command") continue;
      if (given(("--" + k).c_str())) continue;
      if (k == "family") c.family = v.get<std::string>();
      else if (k == "params" || k == "weights") c.params = list_or_string(v);
      else if (k == "grid") c.grid = v.is_number() ? std::to_string(v.get<int>()) : v.get<std::string>();
      else if (k == "h") c.h = v.get<double>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "tol") c.tol = v.get<double>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "samples") c.samples = v.get<int>();
      else if (k == "poles") c.poles = v.get<std::string>();
      else if (k == "form") c.form = v.get<std::string>();
      else if (k == "matrix") c.matrix = v.dump();
      else if (k == "basis") c.basis = v.get<std::string>();
      else if (k == "xi") c.xi = list_or_string(v);
      else if (k == "point") c.point = v.dump();
      else if (k == "max") c.max_weight = v.get<int>();
      else throw Error(ErrorKind::Parameter, "unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parameter, std::string("bad config value: ") + e.what());
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternion Kaehler quotients of HH2: classification, moment maps, SDE checks"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--family", cfg.family, "family name");
    s->add_option("--params,--weights", cfg.params, "comma-separated parameters");
    s->add_option("--grid", cfg.grid, "n, or lo:hi:n per axis separated by commas");
    s->add_option("--h", cfg.h, "finite-difference step")->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg.seed, "random seed");
    s->add_option("--tol", cfg.tol, "pass threshold");
    s->add_option("--out", cfg.out, "output file (default stdout)");
    s->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--config", cfg.config, "JSON config; flags take precedence");
  };
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Config&, Output&);
  };
  const Cmd cmds[] = {{"classify", "normal form, height and Bryant case of a generator", cmd_classify},
                      {"moment", "sample the momentum zero set of a family", cmd_moment},
                      {"slice", "evaluate the quotient slice and metric at one point", cmd_slice},
                      {"verify-sde", "Einstein and self-duality checks on a grid", cmd_verify_sde},
                      {"eigen", "Laplacian eigenvalue check of a pole set on a half-plane grid", cmd_eigen},
                      {"pullback", "eigenfunction versus quadratic form on zero-set samples", cmd_pullback},
                      {"bergman", "smoothness of the (2,1) circle quotients", cmd_bergman}};
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) {
    CLI::App* s = app.add_subcommand(c.name, c.help);
    common(s);
    subs.emplace_back(s, &c);
  }
  auto* classify_cmd = subs[0].first;
  classify_cmd->add_option("--matrix", cfg.matrix, "3x3 JSON array of [w,x,y,z]");
  classify_cmd->add_option("--form", cfg.form, "e.g. T0Diag(1,2,3) or ~T2(1,0)");
  classify_cmd->add_option("--basis", cfg.basis, "u or vtilde (for --matrix)");
  subs[1].first->add_option("--point", cfg.point, "JSON list of 3 quaternions in the family basis");
  subs[1].first->add_option("--samples", cfg.samples, "number of zero-set samples");
  subs[2].first->add_option("--xi", cfg.xi, "slice coordinates (4 numbers)");
  subs[4].first->add_option("--poles", cfg.poles, "mono:a,b[,charge];pedersen:a,b,c;dipole:c;tripole:c");
  subs[5].first->add_option("--samples", cfg.samples, "number of zero-set samples");
  subs[6].first->add_option("--max", cfg.max_weight, "weight grid bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    for (auto& [s, c] : subs)
      if (s->parsed()) out << s->help();
    return Pass;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return Pass;
    }
    err << "error: " << e.what() << "\n";
    return InputError;
  }

  for (auto& [s, c] : subs) {
    if (!s->parsed()) continue;
    try {
      apply_config_file(cfg, *s);
      Output o;
      o.doc["config"] = config_json(cfg, c->name);
      const int code = c->fn(cfg, o);
      o.doc["status"] = code == Pass ? "pass" : "fail";
      emit(cfg, o, out);
      return code;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_code(e.kind());
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return InputError;
    }
  }
  return InputError;
}

}  // namespace qkq::cli
