#include "htorsion/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "htorsion/errors.hpp"
#include "htorsion/random.hpp"

namespace htorsion {

namespace {

// --- input -------------------------------------------------------------------

void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw InvalidInput("unknown key '" + key + "' in " + where);
  }
}

int get_int(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InvalidInput(std::string("missing '") + key + "' in " + where);
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw InvalidInput(std::string("'") + key + "' must be an integer in " + where);
  return v.get<int>();
}

double get_number(const Json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw InvalidInput(std::string("'") + key + "' must be a number in " + where);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidInput(std::string("'") + key + "' is not finite in " + where);
  return x;
}

Complex get_complex(const Json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw InvalidInput("expected a number or an [re, im] pair in " + where);
}

struct Entry {
  int up = 0;
  int i = 0;
  int k = 0;
  Complex value;
};

int check_index(int idx, int n, const std::string& where) {
  if (idx < 1 || idx > n) throw InvalidInput("index " + std::to_string(idx) + " out of range 1.." + std::to_string(n) + " in " + where);
  return idx - 1;
}

Entry parse_entry(const Json& e, int n, bool real_value, const std::string& where) {
  if (!e.is_object()) throw InvalidInput("entries of " + where + " must be objects");
  if (real_value) require_keys(e, {"up", "lo", "value"}, where);
  else require_keys(e, {"up", "lo", "re", "im"}, where);
  Entry out;
  out.up = check_index(get_int(e, "up", where), n, where);
  if (!e.contains("lo") || !e.at("lo").is_array() || e.at("lo").size() != 2 || !e.at("lo")[0].is_number_integer() ||
      !e.at("lo")[1].is_number_integer()) {
    throw InvalidInput("'lo' must be a pair of integers in " + where);
  }
  out.i = check_index(e.at("lo")[0].get<int>(), n, where);
  out.k = check_index(e.at("lo")[1].get<int>(), n, where);
  if (real_value) {
    if (!e.contains("value")) throw InvalidInput("missing 'value' in " + where);
    out.value = get_number(e, "value", 0.0, where);
  } else {
    out.value = {get_number(e, "re", 0.0, where), get_number(e, "im", 0.0, where)};
  }
  return out;
}

// Fills an antisymmetric table from a list, so that value(up, i, k) = -value(up, k, i).
template <class Setter>
void fill_antisymmetric(const Json& list, int n, bool real_value, const std::string& where, Setter set) {
  if (!list.is_array()) throw InvalidInput(where + " must be an array");
  std::map<std::tuple<int, int, int>, Complex> seen;
  for (const Json& e : list) {
    const Entry en = parse_entry(e, n, real_value, where);
    if (en.i == en.k) {
      if (en.value != Complex{}) throw InvalidInput("diagonal entry of antisymmetric " + where + " must vanish");
      continue;
    }
    const auto key = std::make_tuple(en.up, en.i, en.k);
    if (seen.contains(key)) throw InvalidInput("duplicate entry in " + where);
    const auto partner = std::make_tuple(en.up, en.k, en.i);
    if (auto it = seen.find(partner); it != seen.end()) {
      const double scale = std::max({1.0, std::abs(en.value), std::abs(it->second)});
      if (std::abs(en.value + it->second) > 1e-12 * scale) {
        throw InvalidInput("entries of " + where + " are not antisymmetric");
      }
    }
    seen[key] = en.value;
    set(en.up, en.i, en.k, en.value);
    set(en.up, en.k, en.i, -en.value);
  }
}

CMat parse_metric(const Json& m, int n) {
  if (!m.is_array() || static_cast<int>(m.size()) != n) throw DimensionMismatch("metric must be an n x n array");
  CMat h(n, n);
  for (int i = 0; i < n; ++i) {
    if (!m[i].is_array() || static_cast<int>(m[i].size()) != n) throw DimensionMismatch("metric must be an n x n array");
    for (int j = 0; j < n; ++j) h(i, j) = get_complex(m[i][j], "metric");
  }
  if (!all_finite(h)) throw InvalidInput("metric has non-finite entries");
  return h;
}

StructureConstants parse_constants(const Json& doc) {
  const int n = get_int(doc, "n", "input");
  if (n < 1 || n > InvariantForm::kMaxDim) throw InvalidInput("n must lie in 1..15");
  StructureConstants sc(n);
  if (doc.contains("C")) {
    fill_antisymmetric(doc.at("C"), n, false, "C", [&](int up, int i, int k, Complex v) { sc.C(up, i, k) = v; });
  }
  if (doc.contains("D")) {
    const Json& list = doc.at("D");
    if (!list.is_array()) throw InvalidInput("D must be an array");
    std::set<std::tuple<int, int, int>> seen;
    for (const Json& e : list) {
      const Entry en = parse_entry(e, n, false, "D");
      if (!seen.insert({en.up, en.i, en.k}).second) throw InvalidInput("duplicate entry in D");
      sc.D(en.up, en.i, en.k) = en.value;
    }
  }
  return sc;
}

StructureConstants parse_real_algebra(const Json& ra) {
  if (!ra.is_object()) throw InvalidInput("real_algebra must be an object");
  require_keys(ra, {"dim", "f", "J"}, "real_algebra");
  const int dim = get_int(ra, "dim", "real_algebra");
  if (dim < 2 || dim % 2 != 0 || dim > 2 * InvariantForm::kMaxDim) {
    throw InvalidInput("real_algebra.dim must be even and lie in 2..30");
  }
  RealLieData rl(dim);
  if (ra.contains("f")) {
    fill_antisymmetric(ra.at("f"), dim, true, "real_algebra.f",
                       [&](int up, int i, int k, Complex v) { rl.f(up, i, k) = v.real(); });
  }
  if (!ra.contains("J")) throw InvalidInput("missing 'J' in real_algebra");
  const Json& j = ra.at("J");
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw DimensionMismatch("J must be a dim x dim array");
  for (int r = 0; r < dim; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != dim) throw DimensionMismatch("J must be a dim x dim array");
    for (int c = 0; c < dim; ++c) {
      if (!j[r][c].is_number()) throw InvalidInput("J entries must be numbers");
      rl.J(r, c) = j[r][c].get<double>();
    }
  }
  return complexify(rl);
}

// --- formatting ----------------------------------------------------------------

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Json real_vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json tensor_entries_json(const CTensor3& t) {
  Json out = Json::array();
  const int n = t.dim();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (t(j, i, k) == Complex{}) continue;
        Json e;
        e["up"] = j + 1;
        e["lo"] = Json::array({i + 1, k + 1});
        e["value"] = complex_json(t(j, i, k));
        out.push_back(std::move(e));
      }
  return out;
}

Json flag_json(const FlagResidual& f) {
  Json j;
  j["flag"] = f.flag;
  j["residual"] = f.residual;
  return j;
}

Json tool_json() {
  Json j;
  j["name"] = kToolName;
  j["version"] = kToolVersion;
  return j;
}

Json validation_json(const ValidationReport& v) {
  Json j;
  j["ok"] = v.ok();
  Json checks = Json::array();
  for (const ValidationCheck& c : v.checks) {
    Json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["residual"] = c.residual;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json classification_json(const ClassificationReport& c) {
  Json j;
  j["tolerance"] = c.tol;
  j["kahler"] = flag_json(c.kahler);
  j["balanced"] = flag_json(c.balanced);
  j["gauduchon"] = flag_json(c.gauduchon);
  j["pluriclosed"] = flag_json(c.pluriclosed);
  j["lck_shape"] = flag_json(c.lck_shape);
  j["stp"] = flag_json(c.stp);
  Json nil;
  nil["flag"] = c.nilpotent_J.flag;
  if (c.nilpotent_J.witness) {
    Json w = Json::array();
    for (int idx : *c.nilpotent_J.witness) w.push_back(idx + 1);
    nil["witness"] = std::move(w);
  } else {
    nil["witness"] = nullptr;
  }
  nil["scope"] = "reorderings of the unitary frame";
  j["nilpotent_J"] = std::move(nil);
  return j;
}

Json residuals_json(const ResidualReport& r) {
  Json j;
  j["F_value"] = r.F_value;
  j["G_value"] = r.G_value;
  j["b"] = r.b;
  j["a"] = r.a;
  j["Q_F"] = matrix_json(r.Q_F);
  j["Q_F_norm"] = r.Q_F_norm;
  j["Q_G"] = matrix_json(r.Q_G);
  j["Q_G_norm"] = r.Q_G_norm;
  j["trace_residual"] = r.trace_residual;
  return j;
}

Json torsion_json(const TorsionPackage& p) {
  Json j;
  j["normT2"] = p.normT2;
  j["normEta2"] = p.normEta2;
  j["chi"] = p.chi;
  j["chi_imag"] = p.chi_imag;
  j["eta"] = vector_json(p.eta);
  j["lee"] = real_vector_json(p.lee);
  j["T"] = tensor_entries_json(p.T);
  j["A"] = matrix_json(p.A);
  j["B"] = matrix_json(p.B);
  j["phi"] = matrix_json(p.phi);
  j["xi"] = matrix_json(p.xi);
  return j;
}

// Text helpers: 6 significant digits, round-off noise shown as 0.
constexpr double kDisplayZero = 5e-16;

std::string num(double x) {
  if (std::abs(x) < kDisplayZero) x = 0.0;
  return fmt::format("{:.6g}", x);
}

std::string cnum(Complex z) {
  const double re = std::abs(z.real()) < kDisplayZero ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < kDisplayZero ? 0.0 : z.imag();
  if (im == 0.0) return num(re);
  if (re == 0.0) return num(im) + "i";
  return fmt::format("{}{}{}i", num(re), im < 0 ? "-" : "+", num(std::abs(im)));
}

void append_matrix(std::string& out, const std::string& label, const CMat& m) {
  out += fmt::format("  {} =\n", label);
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cells.push_back(cnum(m(i, j)));
      width = std::max(width, cells.back().size());
    }
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += "   ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += fmt::format(" {:>{}}", cells[c++], width);
    out += "\n";
  }
}

std::string vector_text(const CVec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + cnum(v(i));
  return s + "]";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string input_summary(const InputDocument& in) {
  if (in.echo.contains("catalog")) return "catalog " + in.echo.at("catalog").get<std::string>();
  if (in.echo.contains("real_algebra")) return "real algebra, complex dimension " + std::to_string(in.hs.sc.n);
  return "structure constants, n = " + std::to_string(in.hs.sc.n);
}

void append_header(std::string& out, const std::string& command, const InputDocument& in) {
  out += fmt::format("{} {}  {}\n", kToolName, kToolVersion, command);
  out += fmt::format("input: {}\n", input_summary(in));
}

void append_classification(std::string& out, const ClassificationReport& c) {
  out += fmt::format("classification (tol {})\n", num(c.tol));
  out += fmt::format("  {:<14}{:<6}{}\n", "class", "flag", "residual");
  const std::pair<const char*, const FlagResidual*> rows[] = {
      {"kahler", &c.kahler}, {"balanced", &c.balanced}, {"gauduchon", &c.gauduchon},
      {"pluriclosed", &c.pluriclosed}, {"lck_shape", &c.lck_shape}, {"stp", &c.stp}};
  for (const auto& [name, f] : rows) out += fmt::format("  {:<14}{:<6}{}\n", name, yes_no(f->flag), num(f->residual));
  std::string witness = "-";
  if (c.nilpotent_J.witness) {
    witness.clear();
    for (int idx : *c.nilpotent_J.witness) witness += (witness.empty() ? "" : ",") + std::to_string(idx + 1);
  }
  out += fmt::format("  {:<14}{:<6}order {}\n", "nilpotent_J", yes_no(c.nilpotent_J.flag), witness);
}

void append_residuals(std::string& out, const ResidualReport& r) {
  out += "functionals\n";
  out += fmt::format("  F = {}   G = {}   b = {}   a = {}\n", num(r.F_value), num(r.G_value), num(r.b), num(r.a));
  out += fmt::format("  |Q_F| = {}   |Q_G| = {}   trace residual = {}\n", num(r.Q_F_norm), num(r.Q_G_norm),
                     num(r.trace_residual));
  append_matrix(out, "Q_F", r.Q_F);
  append_matrix(out, "Q_G", r.Q_G);
}

void require_finite(const ResidualReport& r) {
  if (!std::isfinite(r.F_value) || !std::isfinite(r.G_value) || !all_finite(r.Q_F) || !all_finite(r.Q_G)) {
    throw NumericalFailure("non-finite residuals");
  }
}

}  // namespace

// --- parsing -------------------------------------------------------------------

InputDocument parse_input(const Json& doc, double tol) {
  if (!doc.is_object()) throw InvalidInput("input must be a JSON object");
  require_keys(doc, {"n", "C", "D", "metric", "real_algebra", "catalog"}, "input");
  const bool has_cd = doc.contains("n") || doc.contains("C") || doc.contains("D");
  const bool has_real = doc.contains("real_algebra");
  const bool has_catalog = doc.contains("catalog");
  if (int(has_cd) + int(has_real) + int(has_catalog) != 1) {
    throw InvalidInput("input needs exactly one of: n/C/D, real_algebra, catalog");
  }

  StructureConstants sc;
  if (has_catalog) {
    if (!doc.at("catalog").is_string()) throw InvalidInput("catalog must be a string");
    sc = catalog(doc.at("catalog").get<std::string>()).sc;
  } else if (has_real) {
    sc = parse_real_algebra(doc.at("real_algebra"));
  } else {
    sc = parse_constants(doc);
  }

  const int n = sc.n;
  const CMat metric = doc.contains("metric") ? parse_metric(doc.at("metric"), n) : CMat::Identity(n, n);
  const ValidationReport v = validate(sc, tol);
  if (!v.ok()) {
    std::string failed;
    for (const ValidationCheck& c : v.checks)
      if (!c.passed && c.name != "unimodular") failed += (failed.empty() ? "" : ", ") + c.name;
    throw InvalidInput("structure constants fail validation: " + failed);
  }
  InputDocument out;
  out.echo = doc;
  out.hs = make_structure(std::move(sc), HermMat::from(metric).matrix());
  return out;
}

InputDocument load_input(const std::string& path, double tol) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read input file " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  return parse_input(doc, tol);
}

InputDocument catalog_input(const std::string& name) {
  Json doc;
  doc["catalog"] = name;
  return parse_input(doc);
}

// --- pipelines -------------------------------------------------------------------

AnalysisResult run_analysis(InputDocument input, double tol) {
  AnalysisResult r;
  r.tol = tol;
  r.validation = validate(input.hs.sc);
  r.pkg = analyze(input.hs);
  r.classification = classify(r.pkg, input.hs, tol);
  r.residuals = residual_report(input.hs, r.pkg);
  require_finite(r.residuals);
  r.input = std::move(input);
  return r;
}

CriticalResult run_check_critical(InputDocument input, const std::string& functional, double tol) {
  if (functional != "torsion" && functional != "gauduchon") {
    throw InvalidInput("functional must be torsion or gauduchon");
  }
  CriticalResult r;
  r.tol = tol;
  r.functional = functional;
  r.residuals = residual_report(input.hs);
  require_finite(r.residuals);
  r.residual = functional == "torsion" ? r.residuals.Q_F_norm : r.residuals.Q_G_norm;
  r.critical = r.residual <= tol;
  r.input = std::move(input);
  return r;
}

double variation_deviation(double analytic, double fd) {
  const double scale = std::max(std::abs(analytic), std::abs(fd));
  if (scale < kVariationAbsoluteFloor) return 0.0;
  return std::abs(analytic - fd) / scale;
}

double fd_first_variation(const HermitianStructure& hs, const HermMat& h, double step) {
  auto f = [&](double t) {
    HermitianStructure moved = hs;
    try {
      moved.H = HermMat::from(hs.H.matrix() + t * h.matrix());
      const double v = torsion_functional(moved);
      if (!std::isfinite(v)) throw NumericalFailure("torsion functional is not finite");
      return v;
    } catch (const InvalidInput& e) {
      throw NumericalFailure(std::string("finite-difference stencil left the metric cone: ") + e.what());
    }
  };
  return (-f(2.0 * step) + 8.0 * f(step) - 8.0 * f(-step) + f(-2.0 * step)) / (12.0 * step);
}

VariationResult run_variation_check(InputDocument input, int directions, double fd_step, std::uint64_t seed) {
  if (directions < 1) throw InvalidInput("--directions must be at least 1");
  if (!(fd_step > 0.0)) throw InvalidInput("--fd-step must be positive");
  VariationResult r;
  r.directions = directions;
  r.fd_step = fd_step;
  r.seed = seed;
  r.unimodular = validate(input.hs.sc).get("unimodular").passed;
  Rng rng(seed);
  const int n = input.hs.sc.n;
  for (int d = 0; d < directions; ++d) {
    const HermMat h = random_hermitian_direction(rng, n);
    VariationSample s;
    s.analytic = first_variation(input.hs, h);
    s.finite_difference = fd_first_variation(input.hs, h, fd_step);
    if (!std::isfinite(s.analytic) || !std::isfinite(s.finite_difference)) {
      throw NumericalFailure("non-finite first variation");
    }
    s.deviation = variation_deviation(s.analytic, s.finite_difference);
    r.max_deviation = std::max(r.max_deviation, s.deviation);
    r.samples.push_back(s);
  }
  r.passed = r.max_deviation <= kVariationTolerance;
  r.input = std::move(input);
  return r;
}

OptimizeResult run_optimize(InputDocument input, const OptimConfig& cfg, std::uint64_t seed, double perturb,
                            double tol) {
  cfg.check();
  if (!(perturb >= 0.0)) throw InvalidInput("--perturb must be non-negative");
  OptimizeResult r;
  r.tol = tol;
  r.config = cfg;
  r.seed = seed;
  r.perturb = perturb;
  Rng rng(seed);
  const HermitianStructure start = perturb_metric(input.hs, rng, perturb, cfg.det_normalized);
  r.start_metric = start.H;
  r.trace = minimize(start, cfg);
  InputDocument final_input = input;
  final_input.hs.H = r.trace.final_metric;
  r.final_analysis = run_analysis(std::move(final_input), tol);
  r.input = std::move(input);
  return r;
}

// --- structured reports -------------------------------------------------------

Json to_json(const AnalysisResult& r) {
  Json j;
  j["tool"] = tool_json();
  j["command"] = "analyze";
  j["tolerance"] = r.tol;
  j["input"] = r.input.echo;
  j["validation"] = validation_json(r.validation);
  j["metric"] = matrix_json(r.input.hs.H.matrix());
  j["unitary_frame"] = matrix_json(r.pkg.frame);
  j["torsion"] = torsion_json(r.pkg);
  j["classification"] = classification_json(r.classification);
  j["residuals"] = residuals_json(r.residuals);
  return j;
}

Json to_json(const CriticalResult& r) {
  Json j;
  j["tool"] = tool_json();
  j["command"] = "check-critical";
  j["tolerance"] = r.tol;
  j["input"] = r.input.echo;
  j["functional"] = r.functional;
  j["residual"] = r.residual;
  j["critical"] = r.critical;
  j["residuals"] = residuals_json(r.residuals);
  return j;
}

Json to_json(const VariationResult& r) {
  Json j;
  j["tool"] = tool_json();
  j["command"] = "variation-check";
  j["input"] = r.input.echo;
  j["directions"] = r.directions;
  j["fd_step"] = r.fd_step;
  j["seed"] = r.seed;
  j["unimodular"] = r.unimodular;
  j["tolerance"] = kVariationTolerance;
  j["absolute_floor"] = kVariationAbsoluteFloor;
  Json samples = Json::array();
  for (const VariationSample& s : r.samples) {
    Json e;
    e["analytic"] = s.analytic;
    e["finite_difference"] = s.finite_difference;
    e["deviation"] = s.deviation;
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  j["max_deviation"] = r.max_deviation;
  j["passed"] = r.passed;
  return j;
}

Json to_json(const OptimizeResult& r) {
  Json j;
  j["tool"] = tool_json();
  j["command"] = "optimize";
  j["tolerance"] = r.tol;
  j["input"] = r.input.echo;
  Json cfg;
  cfg["objective"] = to_string(r.config.objective);
  cfg["max_iter"] = r.config.max_iter;
  cfg["grad_tol"] = r.config.grad_tol;
  cfg["fd_step"] = r.config.fd_step;
  cfg["initial_step"] = r.config.initial_step;
  cfg["max_step"] = r.config.max_step;
  cfg["shrink"] = r.config.shrink;
  cfg["armijo"] = r.config.armijo;
  cfg["det_normalized"] = r.config.det_normalized;
  cfg["seed"] = r.seed;
  cfg["perturb"] = r.perturb;
  j["config"] = std::move(cfg);
  j["start_metric"] = matrix_json(r.start_metric.matrix());
  Json tr;
  tr["converged"] = r.trace.converged;
  tr["reason"] = r.trace.reason;
  tr["iterations"] = r.trace.steps.empty() ? 0 : r.trace.steps.back().iteration;
  Json steps = Json::array();
  for (const OptimStep& s : r.trace.steps) {
    Json e;
    e["iteration"] = s.iteration;
    e["value"] = s.value;
    e["grad_norm"] = s.grad_norm;
    e["residual_norm"] = s.residual_norm;
    e["det"] = s.det;
    e["step"] = s.step;
    steps.push_back(std::move(e));
  }
  tr["steps"] = std::move(steps);
  j["trace"] = std::move(tr);
  j["final_metric"] = matrix_json(r.trace.final_metric.matrix());
  const AnalysisResult& fa = r.final_analysis;
  Json fin;
  fin["metric_condition"] = frame_condition_number(r.trace.final_metric.matrix());
  fin["eta_norm"] = std::sqrt(fa.pkg.normEta2);
  fin["normT2"] = fa.pkg.normT2;
  fin["chi"] = fa.pkg.chi;
  fin["classification"] = classification_json(fa.classification);
  fin["residuals"] = residuals_json(fa.residuals);
  j["final"] = std::move(fin);
  return j;
}

// --- text reports -------------------------------------------------------------

std::string to_text(const AnalysisResult& r) {
  std::string out;
  append_header(out, "analyze", r.input);
  out += fmt::format("validation: {}\n", r.validation.ok() ? "ok" : "FAILED");
  for (const ValidationCheck& c : r.validation.checks) {
    out += fmt::format("  {:<16}{:<6}{}\n", c.name, c.passed ? "pass" : "fail", num(c.residual));
  }
  append_matrix(out, "metric H", r.input.hs.H.matrix());
  const TorsionPackage& p = r.pkg;
  out += "torsion (unitary frame)\n";
  out += fmt::format("  |T|^2 = {}   |eta|^2 = {}   chi = {}\n", num(p.normT2), num(p.normEta2), num(p.chi));
  out += fmt::format("  eta = {}\n", vector_text(p.eta));
  append_matrix(out, "A", p.A);
  append_matrix(out, "B", p.B);
  append_matrix(out, "phi", p.phi);
  append_matrix(out, "xi", p.xi);
  append_classification(out, r.classification);
  append_residuals(out, r.residuals);
  return out;
}

std::string to_text(const CriticalResult& r) {
  std::string out;
  append_header(out, "check-critical", r.input);
  out += fmt::format("functional: {}\n", r.functional);
  out += fmt::format("residual norm: {}  (tol {})\n", num(r.residual), num(r.tol));
  out += fmt::format("critical: {}\n", yes_no(r.critical));
  append_matrix(out, r.functional == "torsion" ? "Q_F" : "Q_G",
                r.functional == "torsion" ? r.residuals.Q_F : r.residuals.Q_G);
  return out;
}

std::string to_text(const VariationResult& r) {
  std::string out;
  append_header(out, "variation-check", r.input);
  out += fmt::format("directions: {}   fd step: {}   seed: {}\n", r.directions, num(r.fd_step), r.seed);
  if (!r.unimodular) out += "note: the algebra is not unimodular; the analytic formula does not apply\n";
  out += fmt::format("  {:>4}  {:>14}  {:>14}  {:>12}\n", "k", "analytic", "fd", "deviation");
  for (std::size_t k = 0; k < r.samples.size(); ++k) {
    const VariationSample& s = r.samples[k];
    out += fmt::format("  {:>4}  {:>14}  {:>14}  {:>12}\n", k + 1, num(s.analytic), num(s.finite_difference),
                       num(s.deviation));
  }
  out += fmt::format("max deviation: {}  (tol {})\n", num(r.max_deviation), num(kVariationTolerance));
  out += fmt::format("passed: {}\n", yes_no(r.passed));
  return out;
}

std::string to_text(const OptimizeResult& r) {
  std::string out;
  append_header(out, "optimize", r.input);
  out += fmt::format("objective: {}   seed: {}   perturb: {}   det normalized: {}\n", to_string(r.config.objective),
                     r.seed, num(r.perturb), yes_no(r.config.det_normalized));
  out += fmt::format("  {:>6}  {:>14}  {:>12}  {:>12}\n", "iter", "objective", "|grad|", "|Q|");
  const auto& steps = r.trace.steps;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    // head and tail of long traces; the structured report has every step
    if (steps.size() > 12 && k >= 5 && k + 5 < steps.size()) {
      if (k == 5) out += "     ...\n";
      continue;
    }
    const OptimStep& s = steps[k];
    out += fmt::format("  {:>6}  {:>14}  {:>12}  {:>12}\n", s.iteration, num(s.value), num(s.grad_norm),
                       num(s.residual_norm));
  }
  out += fmt::format("converged: {}   reason: {}\n", yes_no(r.trace.converged), r.trace.reason);
  append_matrix(out, "final metric", r.trace.final_metric.matrix());
  out += fmt::format("  |eta| = {}   metric condition = {}\n", num(std::sqrt(r.final_analysis.pkg.normEta2)),
                     num(frame_condition_number(r.trace.final_metric.matrix())));
  append_classification(out, r.final_analysis.classification);
  append_residuals(out, r.final_analysis.residuals);
  return out;
}

// --- catalog ----------------------------------------------------------------------

std::string render_form(const InvariantForm& f) {
  if (f.empty()) return "0";
  const int n = f.dim();
  std::string out;
  for (const auto& [mask, c] : f.terms()) {
    std::string mono;
    for (int g : InvariantForm::generators_of(mask)) {
      if (!mono.empty()) mono += "^";
      mono += g < n ? fmt::format("phi_{}", g + 1) : fmt::format("conj(phi_{})", g - n + 1);
    }
    std::string coeff;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      if (std::abs(c.real()) != 1.0) coeff = num(std::abs(c.real())) + " ";
    } else if (c.real() == 0.0) {
      negative = c.imag() < 0.0;
      coeff = (std::abs(c.imag()) == 1.0 ? std::string("i") : num(std::abs(c.imag())) + "i") + " ";
    } else {
      coeff = "(" + cnum(c) + ") ";
    }
    if (out.empty()) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    out += coeff + mono;
  }
  return out;
}

std::vector<std::string> structure_equations(const StructureConstants& sc) {
  std::vector<std::string> lines;
  for (int j = 0; j < sc.n; ++j) {
    lines.push_back(fmt::format("d phi_{} = {}", j + 1, render_form(exterior_d_generator(sc, j))));
  }
  return lines;
}

std::vector<CatalogFamily> catalog_families() {
  return {
      {"abelian-N", "1 <= N <= 15", catalog_description("abelian-1")},
      {"so3c", "", catalog_description("so3c")},
      {"sokc-K", "3 <= K <= 6", catalog_description("sokc-3")},
      {"iwasawa", "", catalog_description("iwasawa")},
      {"kodaira-thurston", "", catalog_description("kodaira-thurston")},
  };
}

Json catalog_list_json() {
  Json j;
  j["tool"] = tool_json();
  j["command"] = "catalog list";
  Json entries = Json::array();
  for (const CatalogFamily& f : catalog_families()) {
    Json e;
    e["name"] = f.pattern;
    e["parameters"] = f.parameters;
    e["description"] = f.description;
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

std::string catalog_list_text() {
  std::string out;
  for (const CatalogFamily& f : catalog_families()) {
    const std::string name = f.parameters.empty() ? f.pattern : f.pattern + " (" + f.parameters + ")";
    out += fmt::format("{:<30}{}\n", name, f.description);
  }
  return out;
}

Json catalog_show_json(const std::string& name) {
  const HermitianStructure hs = catalog(name);
  Json j;
  j["tool"] = tool_json();
  j["command"] = "catalog show";
  j["name"] = name;
  j["description"] = catalog_description(name);
  j["n"] = hs.sc.n;
  auto entries = [](const CTensor3& t, bool antisymmetric) {
    Json out = Json::array();
    const int n = t.dim();
    for (int up = 0; up < n; ++up)
      for (int i = 0; i < n; ++i)
        for (int k = antisymmetric ? i + 1 : 0; k < n; ++k) {
          const Complex v = t(up, i, k);
          if (v == Complex{}) continue;
          Json e;
          e["up"] = up + 1;
          e["lo"] = Json::array({i + 1, k + 1});
          e["re"] = v.real();
          e["im"] = v.imag();
          out.push_back(std::move(e));
        }
    return out;
  };
  j["C"] = entries(hs.sc.C, true);
  j["D"] = entries(hs.sc.D, false);
  j["metric"] = matrix_json(hs.H.matrix());
  j["equations"] = structure_equations(hs.sc);
  return j;
}

std::string catalog_show_text(const std::string& name) {
  const HermitianStructure hs = catalog(name);
  std::string out = fmt::format("{}: {}\n", name, catalog_description(name));
  out += fmt::format("complex dimension {}\n", hs.sc.n);
  for (const std::string& line : structure_equations(hs.sc)) out += "  " + line + "\n";
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace htorsion
