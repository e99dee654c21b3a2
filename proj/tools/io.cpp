#include "io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace entmon::io {

namespace {

// Reads fields of a JSON value and reports failures by path ("registers[1].dim").
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError((path_.empty() ? std::string("document") : path_) + ": " + what);
  }

  Reader field(std::string_view key) const {
    if (!j_.is_object()) fail("expected an object");
    const auto it = j_.find(key);
    const std::string sub = path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    if (it == j_.end()) throw ParseError(sub + ": missing field");
    return Reader(*it, sub);
  }

  bool has(std::string_view key) const { return j_.is_object() && j_.contains(key); }

  Reader at(std::size_t i) const { return Reader(j_[i], path_ + "[" + std::to_string(i) + "]"); }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  bool boolean() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  double number() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_string()) {
      const auto s = j_.get<std::string>();
      if (s == "inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
      if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    fail("expected a number");
  }

  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned()) fail("expected a nonnegative integer");
    return j_.get<std::uint64_t>();
  }

  std::int64_t integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }

 private:
  const Json& j_;
  std::string path_;
};

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json dims_to_json(const Dims& d) { return Json(d); }

Dims dims_from(const Reader& r) {
  Dims d(r.array_size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = r.at(i).unsigned_integer();
  return d;
}

Json witness_to_json(const Witness& w) {
  Json j;
  j["check"] = w.check;
  j["probe"] = w.probe;
  j["part"] = w.part;
  j["profile"] = dims_to_json(w.profile);
  j["trial"] = w.trial;
  j["violation"] = number(w.violation);
  j["values"] = Json::array();
  for (const auto& v : w.values) j["values"].push_back({{"name", v.name}, {"value", number(v.value)}});
  return j;
}

Witness witness_from(const Reader& r) {
  Witness w;
  w.check = r.field("check").string();
  w.probe = r.field("probe").string();
  w.part = r.field("part").string();
  w.profile = dims_from(r.field("profile"));
  w.trial = r.field("trial").integer();
  w.violation = r.field("violation").number();
  const auto values = r.field("values");
  for (std::size_t i = 0; i < values.array_size(); ++i) {
    const auto v = values.at(i);
    w.values.push_back({v.field("name").string(), v.field("value").number()});
  }
  return w;
}

Json check_to_json(const CheckReport& c) {
  Json j;
  j["name"] = c.name;
  j["trials"] = c.trials;
  j["worst_violation"] = number(c.worst_violation);
  j["tol"] = number(c.tol);
  j["passed"] = c.passed;
  j["note"] = c.note;
  j["witness"] = c.witness ? witness_to_json(*c.witness) : Json(nullptr);
  j["parts"] = Json::array();
  for (const auto& p : c.parts) j["parts"].push_back(check_to_json(p));
  return j;
}

CheckReport check_from(const Reader& r) {
  CheckReport c;
  c.name = r.field("name").string();
  c.trials = r.field("trials").unsigned_integer();
  c.worst_violation = r.field("worst_violation").number();
  c.tol = r.field("tol").number();
  c.passed = r.field("passed").boolean();
  c.note = r.field("note").string();
  const auto w = r.field("witness");
  if (!w.json().is_null()) c.witness = witness_from(w);
  const auto parts = r.field("parts");
  for (std::size_t i = 0; i < parts.array_size(); ++i) c.parts.push_back(check_from(parts.at(i)));
  return c;
}

Json config_to_json(const CheckConfig& cfg) {
  Json j;
  j["trials"] = cfg.trials;
  j["tol"] = cfg.tol;
  j["dims"] = Json::array();
  for (const auto& d : cfg.dims) j["dims"].push_back(dims_to_json(d));
  j["ensemble_sizes"] = cfg.ensemble_sizes;
  j["rounds"] = cfg.rounds;
  j["outcomes"] = cfg.outcomes;
  return j;
}

CheckConfig config_from(const Reader& r) {
  CheckConfig cfg;
  cfg.trials = r.field("trials").unsigned_integer();
  cfg.tol = r.field("tol").number();
  const auto dims = r.field("dims");
  cfg.dims.clear();
  for (std::size_t i = 0; i < dims.array_size(); ++i) cfg.dims.push_back(dims_from(dims.at(i)));
  cfg.ensemble_sizes = dims_from(r.field("ensemble_sizes"));
  cfg.rounds = r.field("rounds").unsigned_integer();
  cfg.outcomes = r.field("outcomes").unsigned_integer();
  return cfg;
}

void expect_header(const Reader& r, std::string_view format) {
  if (r.field("format").string() != format)
    throw ParseError("format: expected \"" + std::string(format) + "\"");
  const auto version = r.field("version").integer();
  if (version != kSchemaVersion)
    throw ParseError("version: unsupported schema version " + std::to_string(version));
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

Json state_to_json(const DensityOperator& rho) {
  Json j;
  j["format"] = kStateFormat;
  j["version"] = kSchemaVersion;
  j["registers"] = Json::array();
  for (const auto& r : rho.registers())
    j["registers"].push_back({{"label", r.label}, {"owner", r.owner}, {"dim", r.dim}});
  const auto& m = rho.matrix();
  j["matrix"] = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    j["matrix"].push_back(std::move(row));
  }
  return j;
}

DensityOperator state_from_json(const Json& j) {
  const Reader root(j, "");
  expect_header(root, kStateFormat);
  const auto regs = root.field("registers");
  std::vector<Register> registers;
  for (std::size_t i = 0; i < regs.array_size(); ++i) {
    const auto r = regs.at(i);
    registers.push_back({r.field("label").string(), r.field("owner").string(),
                         static_cast<std::size_t>(r.field("dim").unsigned_integer())});
  }
  const auto rows = root.field("matrix");
  const std::size_t n = rows.array_size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = rows.at(i);
    if (row.array_size() != n) row.fail("expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) {
      const auto z = row.at(k);
      if (z.array_size() != 2) z.fail("expected a [re, im] pair");
      m(i, k) = {z.at(0).number(), z.at(1).number()};
    }
  }
  try {
    return DensityOperator(std::move(m), std::move(registers));
  } catch (const std::exception& e) {
    throw ParseError(std::string("matrix: not a valid density operator: ") + e.what());
  }
}

std::string write_state(const DensityOperator& rho) { return state_to_json(rho).dump(2) + "\n"; }

DensityOperator parse_state(std::string_view text) { return state_from_json(parse_json(text)); }

DensityOperator read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_state(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json report_to_json(const ReportDocument& doc) {
  const auto& c = doc.certification;
  Json j;
  j["format"] = kReportFormat;
  j["version"] = kSchemaVersion;
  j["tool_version"] = doc.tool_version;
  j["measure"] = doc.measure;
  j["seed"] = doc.config.seed;
  j["config"] = config_to_json(doc.config);
  j["ree_convergence_tol"] = doc.ree_convergence_tol ? number(*doc.ree_convergence_tol) : Json(nullptr);
  j["checks"] = Json::array();
  for (const auto& r : c.checks) j["checks"].push_back(check_to_json(r));
  j["predicted_monotone"] = c.predicted_monotone;
  j["direct_monotone"] = c.direct_monotone;
  j["theorem_applicable"] = c.theorem_applicable;
  j["consistent"] = c.consistent;
  j["inconsistencies"] = c.inconsistencies;
  j["verdict"] = c.verdict();
  j["expected_monotone"] = doc.expected_monotone;
  j["matches_expectation"] = doc.matches_expectation;
  if (!doc.timings.empty()) {
    j["timings"] = Json::object();
    for (const auto& t : doc.timings) j["timings"][t.name] = number(t.value);
  }
  return j;
}

ReportDocument report_from_json(const Json& j) {
  const Reader root(j, "");
  expect_header(root, kReportFormat);
  ReportDocument doc;
  doc.tool_version = root.field("tool_version").string();
  doc.measure = root.field("measure").string();
  doc.config = config_from(root.field("config"));
  doc.config.seed = root.field("seed").unsigned_integer();
  const auto gap = root.field("ree_convergence_tol");
  if (!gap.json().is_null()) doc.ree_convergence_tol = gap.number();
  auto& c = doc.certification;
  c.measure = doc.measure;
  const auto checks = root.field("checks");
  for (std::size_t i = 0; i < checks.array_size(); ++i) c.checks.push_back(check_from(checks.at(i)));
  c.predicted_monotone = root.field("predicted_monotone").boolean();
  c.direct_monotone = root.field("direct_monotone").boolean();
  c.theorem_applicable = root.field("theorem_applicable").boolean();
  c.consistent = root.field("consistent").boolean();
  const auto inc = root.field("inconsistencies");
  for (std::size_t i = 0; i < inc.array_size(); ++i) c.inconsistencies.push_back(inc.at(i).string());
  if (root.field("verdict").string() != c.verdict())
    throw ParseError("verdict: does not match predicted_monotone");
  doc.expected_monotone = root.field("expected_monotone").boolean();
  doc.matches_expectation = root.field("matches_expectation").boolean();
  if (root.has("timings")) {
    const auto t = root.field("timings");
    if (!t.json().is_object()) t.fail("expected an object");
    for (const auto& [name, value] : t.json().items())
      doc.timings.push_back({name, Reader(value, t.path() + "." + name).number()});
  }
  return doc;
}

std::string write_report(const ReportDocument& doc) { return report_to_json(doc).dump(2) + "\n"; }

ReportDocument parse_report(std::string_view text) { return report_from_json(parse_json(text)); }

}  // namespace entmon::io
