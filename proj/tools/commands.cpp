#include "commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "entmon/certify.hpp"
#include "entmon/measures.hpp"
#include "entmon/states.hpp"
#include "io.hpp"

namespace entmon::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kReplayTol = 1e-12;

Dims parse_dims(const std::string& text) {
  Dims d;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = std::min(text.find(',', begin), text.size());
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + begin, text.data() + end, value);
    if (ec != std::errc() || ptr != text.data() + end || value == 0)
      throw UsageError("--dims: expected a comma list of positive integers, got '" + text + "'");
    d.push_back(value);
    begin = end + 1;
  }
  return d;
}

std::string fixed12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// The ree gap is tied to the certification tolerance.
MeasureHandle resolve_measure(const std::string& name, std::optional<double> ree_gap) {
  ReeConfig rc;
  if (ree_gap) rc.convergence_tol = *ree_gap;
  auto f = measure_by_name(name, rc);
  if (!f) {
    std::string known;
    for (const auto& n : builtin_measure_names()) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown measure '" + name + "' (known: " + known + ")");
  }
  return *f;
}

std::optional<double> ree_gap_for(const std::string& measure, double tol) {
  if (measure != "ree") return std::nullopt;
  return tol / 100.0;
}

void print_summary(const io::ReportDocument& doc, std::ostream& os, bool with_timings) {
  const auto& c = doc.certification;
  os << doc.measure << ": " << c.verdict() << (c.consistent ? "" : " (INCONSISTENT)") << "\n";
  for (std::size_t i = 0; i < c.checks.size(); ++i) {
    const auto& r = c.checks[i];
    char line[160];
    std::snprintf(line, sizeof line, "  %-20s %s  worst %11s  tol %.1e  trials %zu", r.name.c_str(),
                  r.passed ? "PASS" : "FAIL", sci(r.worst_violation).c_str(), r.tol, r.trials);
    os << line;
    if (with_timings && i < doc.timings.size()) {
      std::snprintf(line, sizeof line, "  %.2fs", doc.timings[i].value);
      os << line;
    }
    if (!r.passed && r.witness)
      os << "  [" << r.witness->probe << (r.witness->part.empty() ? "" : " " + r.witness->part)
         << "]";
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
  }
  for (const auto& msg : c.inconsistencies) os << "  inconsistency: " << msg << "\n";
  os << "  expected " << (doc.expected_monotone ? "monotone" : "not monotone") << ": "
     << (doc.matches_expectation ? "confirmed" : "NOT confirmed") << "\n";
}

int certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.format != "report" && opt.format != "summary")
    throw UsageError("--format: expected report or summary");
  CheckConfig cfg = CheckConfig::defaults_for(resolve_measure(opt.measure, std::nullopt));
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.tol) cfg.tol = *opt.tol;
  if (!opt.dims.empty()) {
    cfg.dims.clear();
    for (const auto& d : opt.dims) cfg.dims.push_back(parse_dims(d));
  }
  if (!opt.ensemble_sizes.empty()) cfg.ensemble_sizes = opt.ensemble_sizes;
  if (opt.rounds) cfg.rounds = *opt.rounds;
  if (opt.outcomes) cfg.outcomes = *opt.outcomes;
  try {
    cfg.validate();
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }

  io::ReportDocument doc;
  doc.measure = opt.measure;
  doc.config = cfg;
  doc.ree_convergence_tol = ree_gap_for(opt.measure, cfg.tol);
  const MeasureHandle f = resolve_measure(opt.measure, doc.ree_convergence_tol);

  std::vector<CheckReport> checks;
  for (const auto& name : check_names()) {
    const auto start = std::chrono::steady_clock::now();
    checks.push_back(run_check(name, f, cfg));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    doc.timings.push_back({name, elapsed.count()});
  }
  doc.certification = assess(f.name, std::move(checks), cfg.tol);
  doc.expected_monotone = f.expected_monotone;
  doc.matches_expectation = matches_expectation(f, doc.certification);

  print_summary(doc, err, true);
  if (opt.format == "summary") {
    print_summary(doc, out, false);
  } else {
    if (!opt.timings) doc.timings.clear();
    out << io::write_report(doc);
  }
  return doc.matches_expectation ? kSuccess : kUnexpected;
}

bool entropic(const std::string& measure) {
  return measure == "ree" || measure == "control-reduction-entropy";
}

int eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  const MeasureHandle f = resolve_measure(opt.measure, std::nullopt);
  const DensityOperator rho = io::read_state_file(opt.state_path);
  double scale = 1.0;
  if (opt.bits) {
    if (entropic(opt.measure))
      scale = 1.0 / std::log(2.0);
    else
      err << "note: --bits has no effect on " << opt.measure << "\n";
  }
  if (opt.measure == "ree") {
    const auto r = ree(rho, ReeConfig{});
    const auto bound = ppt_relative_entropy(rho);
    out << fixed12(r.value * scale) << "\n";
    out << "status " << to_string(r.status) << "\n";
    out << "lower-bound " << fixed12(bound.value * scale) << "\n";
    out << "gap " << sci(r.gap) << "\n";
    return kSuccess;
  }
  out << fixed12(f(rho) * scale) << "\n";
  return kSuccess;
}

int gen(const GenOptions& opt, std::ostream& out, std::ostream&) {
  Rng rng = derive_rng(opt.seed, "gen/" + opt.family, 0, 0);
  auto dims = [&] {
    const Dims d = parse_dims(opt.dims);
    if (d.size() < 2) throw UsageError("--dims: need at least two labs");
    return d;
  };
  auto build = [&]() -> DensityOperator {
    if (opt.family == "max-entangled") {
      if (opt.d < 2) throw UsageError("--d: must be at least 2");
      return max_entangled(opt.d);
    }
    if (opt.family == "isotropic") {
      if (opt.d < 2) throw UsageError("--d: must be at least 2");
      if (!(opt.fidelity >= 0.0 && opt.fidelity <= 1.0))
        throw UsageError("--fidelity: must lie in [0, 1]");
      return isotropic(opt.d, opt.fidelity);
    }
    if (opt.family == "random") {
      const Dims d = dims();
      if (!opt.rank) return random_state(d, rng);
      const std::size_t n = total_dimension(d);
      if (*opt.rank < 1 || *opt.rank > n) throw UsageError("--rank: must lie in [1, " + std::to_string(n) + "]");
      return random_state(d, *opt.rank, rng);
    }
    if (opt.family == "random-separable") {
      const Dims d = dims();
      if (d.size() != 2) throw UsageError("--dims: random-separable is bipartite");
      if (!opt.terms) return random_separable(d[0], d[1], rng);
      if (*opt.terms < 1) throw UsageError("--terms: must be at least 1");
      return random_separable(d[0], d[1], *opt.terms, rng);
    }
    if (opt.family == "flag-mix") {
      const Dims d = dims();
      if (opt.size < 1) throw UsageError("--size: must be at least 1");
      const auto ens = random_ensemble(d, opt.size, rng);
      const auto owners = ens.states().front().owners();
      if (std::find(owners.begin(), owners.end(), opt.site) == owners.end())
        throw UsageError("--site: no lab named '" + opt.site + "'");
      return flag_mix(ens, opt.site, FlagBasis::computational(opt.site, opt.size));
    }
    throw UsageError("unknown family '" + opt.family +
                     "' (known: max-entangled, isotropic, random, random-separable, flag-mix)");
  };
  out << io::write_state(build());
  return kSuccess;
}

// Compares a re-run report against the stored one, part by part.
void compare(const CheckReport& stored, const CheckReport& fresh, const std::string& path,
             std::vector<std::string>& mismatches) {
  const std::string here = path.empty() ? stored.name : path + "/" + stored.name;
  const bool both_nan = std::isnan(stored.worst_violation) && std::isnan(fresh.worst_violation);
  if (stored.name != fresh.name || stored.trials != fresh.trials ||
      !(both_nan || stored.worst_violation == fresh.worst_violation ||
        std::abs(stored.worst_violation - fresh.worst_violation) <= kReplayTol)) {
    mismatches.push_back(here + ": stored " + sci(stored.worst_violation) + ", re-run " +
                         sci(fresh.worst_violation));
    return;
  }
  if (stored.parts.size() != fresh.parts.size()) {
    mismatches.push_back(here + ": part count differs");
    return;
  }
  for (std::size_t i = 0; i < stored.parts.size(); ++i)
    compare(stored.parts[i], fresh.parts[i], here, mismatches);
}

void replay_witnesses(const CheckReport& r, const MeasureHandle& f, const CheckConfig& cfg,
                      std::vector<std::string>& mismatches) {
  if (r.witness) {
    const double v = replay(f, cfg, *r.witness);
    if (!(std::abs(v - r.witness->violation) <= kReplayTol))
      mismatches.push_back(r.name + " witness (" + r.witness->probe + " trial " +
                           std::to_string(r.witness->trial) + "): stored " +
                           sci(r.witness->violation) + ", replayed " + sci(v));
  }
  for (const auto& p : r.parts) replay_witnesses(p, f, cfg, mismatches);
}

int verify_report(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw io::ParseError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  const io::ReportDocument doc = [&] {
    try {
      return io::parse_report(buf.str());
    } catch (const io::ParseError& e) {
      throw io::ParseError(path + ": " + e.what());
    }
  }();
  const MeasureHandle f = resolve_measure(doc.measure, doc.ree_convergence_tol);
  std::vector<std::string> mismatches;
  for (const auto& stored : doc.certification.checks) {
    replay_witnesses(stored, f, doc.config, mismatches);
    compare(stored, run_check(stored.name, f, doc.config), "", mismatches);
  }
  for (const auto& m : mismatches) err << "mismatch: " << m << "\n";
  out << (mismatches.empty() ? "report reproduced" : "report NOT reproduced") << " ("
      << doc.certification.checks.size() << " checks, seed " << doc.config.seed << ")\n";
  return mismatches.empty() ? kSuccess : kUnexpected;
}

// Maps exceptions onto the exit-status contract.
template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace

int cmd_certify(const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded([&] { return certify(opt, out, err); }, err);
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded([&] { return eval(opt, out, err); }, err);
}

int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded([&] { return gen(opt, out, err); }, err);
}

int cmd_verify_report(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded([&] { return verify_report(path, out, err); }, err);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement-monotone certification toolkit"};
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);

  CertifyOptions certify_opt;
  auto* certify_cmd = app.add_subcommand("certify", "Run every check on a built-in measure");
  certify_cmd->add_option("measure", certify_opt.measure, "Measure name")->required();
  certify_cmd->add_option("--seed", certify_opt.seed, "Master seed");
  certify_cmd->add_option("--trials", certify_opt.trials, "Random trials per dimension profile");
  certify_cmd->add_option("--tol", certify_opt.tol, "Violation tolerance");
  certify_cmd->add_option("--dims", certify_opt.dims, "Lab dimensions of one profile, e.g. 2,3 (repeatable)");
  certify_cmd->add_option("--ensemble-size", certify_opt.ensemble_sizes, "Ensemble sizes, cycled over trials");
  certify_cmd->add_option("--rounds", certify_opt.rounds, "LOCC rounds per sampled protocol");
  certify_cmd->add_option("--outcomes", certify_opt.outcomes, "Outcomes per local instrument");
  certify_cmd->add_option("--threads", certify_opt.threads, "Worker threads (0 = hardware)");
  certify_cmd->add_option("--format", certify_opt.format, "report or summary")
      ->check(CLI::IsMember({"report", "summary"}));
  certify_cmd->add_flag("--timings", certify_opt.timings, "Include wall-clock seconds per check in the report");

  EvalOptions eval_opt;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a measure on a state file");
  eval_cmd->add_option("measure", eval_opt.measure, "Measure name")->required();
  eval_cmd->add_option("state", eval_opt.state_path, "State file")->required();
  eval_cmd->add_flag("--bits", eval_opt.bits, "Report entropic values in bits");

  GenOptions gen_opt;
  auto* gen_cmd = app.add_subcommand("gen", "Write a state file to standard output");
  gen_cmd->add_option("family", gen_opt.family,
                      "max-entangled, isotropic, random, random-separable or flag-mix")
      ->required();
  gen_cmd->add_option("--d", gen_opt.d, "Local dimension (max-entangled, isotropic)");
  gen_cmd->add_option("--fidelity", gen_opt.fidelity, "Overlap with the maximally entangled state");
  gen_cmd->add_option("--dims", gen_opt.dims, "Lab dimensions, e.g. 2,3");
  gen_cmd->add_option("--rank", gen_opt.rank, "Rank (random)");
  gen_cmd->add_option("--terms", gen_opt.terms, "Product terms (random-separable)");
  gen_cmd->add_option("--size", gen_opt.size, "Ensemble size (flag-mix)");
  gen_cmd->add_option("--site", gen_opt.site, "Lab holding the flags (flag-mix)");
  gen_cmd->add_option("--seed", gen_opt.seed, "Seed");

  std::string report_path;
  auto* verify_cmd = app.add_subcommand("verify-report", "Re-run a report and compare every value");
  verify_cmd->add_option("report", report_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (*certify_cmd) return cmd_certify(certify_opt, out, err);
  if (*eval_cmd) return cmd_eval(eval_opt, out, err);
  if (*gen_cmd) return cmd_gen(gen_opt, out, err);
  return cmd_verify_report(report_path, out, err);
}

}  // namespace entmon::cli
