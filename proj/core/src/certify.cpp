#include "entmon/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "entmon/locc.hpp"

namespace entmon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Parts = std::vector<std::pair<std::string, double>>;

// Collects the inputs of a trial when it is re-run to build a witness.
struct Recorder {
  bool enabled = false;
  std::vector<NamedState> inputs;
  std::vector<NamedValue> values;
};

struct TrialContext {
  const MeasureHandle& f;
  const CheckConfig& cfg;
  const Dims& dims;
  std::int64_t trial;
  Rng& rng;
  Recorder& rec;
  Parts parts;

  double eval(const std::string& name, const DensityOperator& rho) {
    const double v = f(rho);
    if (rec.enabled) {
      rec.inputs.push_back({name, rho});
      rec.values.push_back({"f(" + name + ")", v});
    }
    return v;
  }

  void note(const std::string& name, double v) {
    if (rec.enabled) rec.values.push_back({name, v});
  }

  void part(std::string name, double violation) {
    parts.emplace_back(std::move(name), std::isnan(violation) ? kInf : violation);
  }

  std::size_t ensemble_size() const {
    const auto& sizes = cfg.ensemble_sizes;
    return trial < 0 ? sizes.front() : sizes[static_cast<std::size_t>(trial) % sizes.size()];
  }
};

using TrialFn = void (*)(TrialContext&);

struct Constructed {
  std::string name;
  TrialFn fn;
};

struct Probe {
  std::string name;
  TrialFn random = nullptr;
  std::vector<Constructed> constructed;
};

struct CheckSpec {
  std::string name;
  std::vector<Probe> probes;
  std::string note;
};

std::string dims_string(const Dims& dims) {
  std::string s;
  for (std::size_t k = 0; k < dims.size(); ++k) s += (k ? "x" : "") + std::to_string(dims[k]);
  return s;
}

std::vector<std::string> labs(const Dims& dims) {
  std::vector<std::string> out;
  for (const auto& r : standard_registers(dims)) out.push_back(r.owner);
  return out;
}

DensityOperator random_mixed_ancilla(std::size_t d, Rng& rng) {
  return single_register_state(random_density(d, d, rng), "X", "X");
}

DensityOperator random_pure_ancilla(std::size_t d, Rng& rng) {
  return single_register_state(ComplexMatrix::projector(haar_vector(d, rng)), "X", "X");
}

std::size_t ancilla_dim(Rng& rng) { return 2 + uniform_index(2, rng); }

DensityOperator product_basis_state(std::size_t i, std::size_t j) {
  return DensityOperator(ComplexMatrix::projector(tensor(basis_vector(2, i), basis_vector(2, j))),
                         Dims{2, 2});
}

DensityOperator local_unitary_image(const DensityOperator& rho, Rng& rng) {
  DensityOperator out = rho;
  for (std::size_t k = 0; k < rho.registers().size(); ++k)
    out = apply_local_unitary(out, haar_unitary(rho.registers()[k].dim, rng), {k});
  return out;
}

// convexity

void convexity_random(TrialContext& ctx) {
  const auto ens = random_ensemble(ctx.dims, ctx.ensemble_size(), ctx.rng);
  const double lhs = ctx.eval("mixture", ens.average());
  double rhs = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    ctx.note("p" + std::to_string(i), ens.weights()[i]);
    rhs += ens.weights()[i] * ctx.eval("rho" + std::to_string(i), ens.states()[i]);
  }
  ctx.part("", lhs - rhs);
}

void convexity_mixture_00_11(TrialContext& ctx) {
  const Ensemble ens({0.5, 0.5}, {product_basis_state(0, 0), product_basis_state(1, 1)});
  const double lhs = ctx.eval("mixture", ens.average());
  const double rhs = 0.5 * ctx.eval("rho0", ens.states()[0]) + 0.5 * ctx.eval("rho1", ens.states()[1]);
  ctx.part("", lhs - rhs);
}

// local unitary invariance

void lui_random(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const auto rotated = local_unitary_image(rho, ctx.rng);
  ctx.part("", std::abs(ctx.eval("rotated", rotated) - ctx.eval("rho", rho)));
}

// ancilla invariance

void ancilla_random(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const double base = ctx.eval("rho", rho);
  for (const auto& site : labs(ctx.dims)) {
    const auto mixed = random_mixed_ancilla(ancilla_dim(ctx.rng), ctx.rng);
    const double fm = ctx.eval("rho+mixed@" + site, embed_ancilla(rho, mixed, site));
    ctx.part(site + "'/mixed/increase", fm - base);
    ctx.part(site + "'/mixed/decrease", base - fm);
    const auto pure = random_pure_ancilla(ancilla_dim(ctx.rng), ctx.rng);
    const double fp = ctx.eval("rho+pure@" + site, embed_ancilla(rho, pure, site));
    ctx.part(site + "'/pure/increase", fp - base);
    ctx.part(site + "'/pure/decrease", base - fp);
  }
}

// flags

void flags_parts(TrialContext& ctx, const Ensemble& ens, const std::vector<std::string>& sites) {
  for (std::size_t i = 0; i < ens.size(); ++i) ctx.note("p" + std::to_string(i), ens.weights()[i]);
  std::vector<double> plain(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i)
    plain[i] = ctx.eval("rho" + std::to_string(i), ens.states()[i]);
  for (const auto& site : sites) {
    const auto basis = FlagBasis::random(site, ens.size(), ens.size(), ctx.rng);
    const double lhs = ctx.eval("flagged-mixture@" + site, flag_mix(ens, site, basis));
    double rhs_plain = 0.0;
    double rhs_flagged = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      rhs_plain += ens.weights()[i] * plain[i];
      const auto single = flag_single(ens.states()[i], i, site, basis);
      rhs_flagged +=
          ens.weights()[i] * ctx.eval("rho" + std::to_string(i) + "+flag@" + site, single);
    }
    ctx.part(site + "'/plain/le", lhs - rhs_plain);
    ctx.part(site + "'/plain/ge", rhs_plain - lhs);
    ctx.part(site + "'/flagged/le", lhs - rhs_flagged);
    ctx.part(site + "'/flagged/ge", rhs_flagged - lhs);
  }
}

void flags_random(TrialContext& ctx) {
  const auto ens = random_ensemble(ctx.dims, ctx.ensemble_size(), ctx.rng);
  flags_parts(ctx, ens, labs(ctx.dims));
}

void flags_two_pure_states(TrialContext& ctx) {
  std::vector<DensityOperator> states;
  for (int i = 0; i < 2; ++i)
    states.emplace_back(ComplexMatrix::projector(haar_vector(4, ctx.rng)), Dims{2, 2});
  flags_parts(ctx, Ensemble({0.5, 0.5}, std::move(states)), {"B"});
}

void flag_equivalence_random(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const double base = ctx.eval("rho", rho);
  const std::size_t k = ctx.ensemble_size();
  for (const auto& site : labs(ctx.dims)) {
    const auto basis = FlagBasis::computational(site, k);
    const std::size_t i = uniform_index(k, ctx.rng);
    ctx.note("flag@" + site, static_cast<double>(i));
    const double flagged = ctx.eval("rho+flag@" + site, flag_single(rho, i, site, basis));
    ctx.part(site + "'", std::abs(flagged - base));
  }
}

// Vidal conditions

void vidal_a(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const double base = ctx.eval("rho", rho);
  for (const auto& site : labs(ctx.dims)) {
    const auto sigma = random_mixed_ancilla(ancilla_dim(ctx.rng), ctx.rng);
    ctx.part(site + "'", ctx.eval("rho+ancilla@" + site, embed_ancilla(rho, sigma, site)) - base);
  }
}

void vidal_b(TrialContext& ctx) {
  for (const auto& site : labs(ctx.dims)) {
    auto regs = standard_registers(ctx.dims);
    const std::size_t dx = ancilla_dim(ctx.rng);
    regs.push_back({site + "'", site, dx});
    const std::size_t n = total_dimension(ctx.dims) * dx;
    const std::size_t rank = 1 + uniform_index(n, ctx.rng);
    const auto joint = DensityOperator::from_trusted(random_density(n, rank, ctx.rng), regs);
    const double reduced = ctx.eval("reduced@" + site, discard_register(joint, site + "'"));
    ctx.part(site + "'", reduced - ctx.eval("joint@" + site, joint));
  }
}

void vidal_d_random(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const auto& regs = rho.registers();
  const auto& reg = regs[uniform_index(regs.size(), ctx.rng)];
  const auto inst = sample_projective_instrument(reg.label, reg.dim, ctx.rng);
  const auto ens = apply_instrument(rho, inst);
  double avg = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    avg += ens.weights()[i] * ctx.eval("outcome" + std::to_string(i), ens.states()[i]);
  ctx.part("", avg - ctx.eval("rho", rho));
}

void vidal_d_maximally_mixed(TrialContext& ctx) {
  const DensityOperator rho(0.25 * ComplexMatrix::identity(4), Dims{2, 2});
  std::vector<ComplexMatrix> projectors;
  for (std::size_t i = 0; i < 2; ++i) projectors.push_back(ComplexMatrix::projector(basis_vector(2, i)));
  const auto ens = apply_instrument(rho, KrausInstrument::projective("A", std::move(projectors)));
  double avg = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    avg += ens.weights()[i] * ctx.eval("outcome" + std::to_string(i), ens.states()[i]);
  ctx.part("", avg - ctx.eval("rho", rho));
}

// LOCC protocols

Ensemble protocol_outcome(TrialContext& ctx, const DensityOperator& rho) {
  auto parties = rho.registers();
  std::rotate(parties.begin(), parties.begin() + static_cast<std::ptrdiff_t>(uniform_index(parties.size(), ctx.rng)),
              parties.end());
  const auto protocol = sample_locc_protocol(parties, ctx.cfg.rounds, ctx.cfg.outcomes, ctx.rng);
  return run_protocol(rho, protocol);
}

void strong_random(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const auto ens = protocol_outcome(ctx, rho);
  double avg = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    avg += ens.weights()[i] * ctx.eval("leaf " + ens.labels()[i], ens.states()[i]);
  ctx.part("", avg - ctx.eval("rho", rho));
}

void strong_identity(TrialContext& ctx) {
  const auto rho = random_state({2, 2}, ctx.rng);
  const auto ens = run_protocol(rho, Protocol::identity("A", 2));
  double avg = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    avg += ens.weights()[i] * ctx.eval("leaf " + ens.labels()[i], ens.states()[i]);
  ctx.part("", avg - ctx.eval("rho", rho));
}

void weak_random(TrialContext& ctx) {
  const auto rho = random_state(ctx.dims, ctx.rng);
  const auto ens = protocol_outcome(ctx, rho);
  ctx.part("", ctx.eval("channel output", ens.average()) - ctx.eval("rho", rho));
}

CheckSpec spec_for(std::string_view name) {
  if (name == "convexity")
    return {"convexity", {{"random", convexity_random, {}}, {"mixture-00-11", nullptr, {{"mixture-00-11", convexity_mixture_00_11}}}}, ""};
  if (name == "lui") return {"lui", {{"random", lui_random, {}}}, ""};
  if (name == "ancilla") return {"ancilla", {{"random", ancilla_random, {}}}, ""};
  if (name == "flags")
    return {"flags",
            {{"random", flags_random, {}},
             {"two-pure-states", nullptr, {{"two-pure-states", flags_two_pure_states}}}},
            ""};
  if (name == "flag-equivalence")
    return {"flag-equivalence", {{"random", flag_equivalence_random, {}}}, ""};
  if (name == "vidal")
    return {"vidal",
            {{"a", vidal_a, {}},
             {"b", vidal_b, {}},
             {"c", lui_random, {}},
             {"d", vidal_d_random, {{"maximally-mixed", vidal_d_maximally_mixed}}}},
            ""};
  if (name == "strong-monotonicity")
    return {"strong-monotonicity", {{"random", strong_random, {{"identity-protocol", strong_identity}}}}, ""};
  if (name == "weak-monotonicity")
    return {"weak-monotonicity", {{"random", weak_random, {}}}, ""};
  throw StructuralError("unknown check '" + std::string(name) + "'");
}

std::string stream_name(const std::string& check, const std::string& probe) {
  return check + "/" + probe;
}

Rng trial_rng(const CheckConfig& cfg, const std::string& stream, const Dims& profile,
              std::int64_t trial) {
  if (trial < 0) return derive_rng(cfg.seed, stream + "#constructed", 0, static_cast<std::uint64_t>(-trial));
  return derive_rng(cfg.seed, stream, stable_hash(dims_string(profile)),
                    static_cast<std::uint64_t>(trial));
}

Parts run_trial(const MeasureHandle& f, const CheckConfig& cfg, const CheckSpec& spec,
                const Probe& probe, const Dims& profile, std::int64_t trial, Recorder& rec) {
  Rng rng = trial_rng(cfg, stream_name(spec.name, probe.name), profile, trial);
  TrialContext ctx{f, cfg, profile, trial, rng, rec, {}};
  if (trial >= 0) {
    probe.random(ctx);
  } else {
    probe.constructed.at(static_cast<std::size_t>(-trial - 1)).fn(ctx);
  }
  return std::move(ctx.parts);
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct Instance {
  Dims profile;
  std::int64_t trial;
};

struct PartAccumulator {
  std::string name;
  std::size_t count = 0;
  double worst = -kInf;
  const Instance* at = nullptr;
};

CheckReport part_report(const MeasureHandle& f, const CheckConfig& cfg, const CheckSpec& spec,
                        const Probe& probe, const PartAccumulator& acc) {
  CheckReport r;
  r.name = acc.name.empty() ? probe.name : acc.name;
  r.trials = acc.count;
  r.tol = cfg.tol;
  r.worst_violation = acc.worst;
  r.passed = !(acc.worst > cfg.tol);
  if (acc.at == nullptr) return r;

  Witness w;
  w.check = spec.name;
  w.probe = probe.name;
  w.part = acc.name;
  w.profile = acc.at->profile;
  w.trial = acc.at->trial;
  w.violation = acc.worst;
  Recorder rec{true, {}, {}};
  run_trial(f, cfg, spec, probe, w.profile, w.trial, rec);
  w.inputs = std::move(rec.inputs);
  w.values = std::move(rec.values);
  r.witness = std::move(w);

  if (!r.passed && f.oracle) {
    // Solver suboptimality can fake a violation; re-evaluate with the oracle.
    MeasureHandle oracle = f;
    oracle.evaluate = f.oracle;
    const double checked = replay(oracle, cfg, *r.witness);
    if (!(checked > cfg.tol)) {
      r.passed = true;
      r.note = "cleared by oracle: violation " + std::to_string(checked) + " at the worst witness";
    } else {
      r.note = "confirmed by oracle: violation " + std::to_string(checked) + " at the worst witness";
    }
  }
  return r;
}

void summarize(CheckReport& r) {
  r.worst_violation = -kInf;
  r.passed = true;
  r.trials = 0;
  for (const auto& p : r.parts) {
    r.trials = std::max(r.trials, p.trials);
    r.passed = r.passed && p.passed;
    if (p.worst_violation > r.worst_violation) {
      r.worst_violation = p.worst_violation;
      r.witness = p.witness;
    }
  }
}

CheckReport run_spec(const CheckSpec& spec, const MeasureHandle& f, const CheckConfig& cfg) {
  cfg.validate();
  CheckReport report;
  report.name = spec.name;
  report.tol = cfg.tol;
  report.note = spec.note;
  for (const auto& probe : spec.probes) {
    std::vector<Instance> instances;
    if (probe.random != nullptr)
      for (const auto& profile : cfg.dims)
        for (std::size_t t = 0; t < cfg.trials; ++t)
          instances.push_back({profile, static_cast<std::int64_t>(t)});
    for (std::size_t k = 0; k < probe.constructed.size(); ++k)
      instances.push_back({{}, -static_cast<std::int64_t>(k) - 1});

    std::vector<Parts> results(instances.size());
    parallel_for(instances.size(), cfg.threads, [&](std::size_t i) {
      Recorder rec;
      results[i] = run_trial(f, cfg, spec, probe, instances[i].profile, instances[i].trial, rec);
    });

    // Ordered reduction: larger violation wins, earlier instance breaks ties.
    std::vector<PartAccumulator> parts;
    for (std::size_t i = 0; i < instances.size(); ++i)
      for (const auto& [name, v] : results[i]) {
        auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& a) { return a.name == name; });
        if (it == parts.end()) it = parts.insert(parts.end(), PartAccumulator{name});
        ++it->count;
        if (v > it->worst) {
          it->worst = v;
          it->at = &instances[i];
        }
      }

    CheckReport probe_report;
    probe_report.name = probe.name;
    probe_report.tol = cfg.tol;
    for (const auto& acc : parts) probe_report.parts.push_back(part_report(f, cfg, spec, probe, acc));
    if (probe_report.parts.size() == 1 && parts.front().name.empty()) {
      report.parts.push_back(std::move(probe_report.parts.front()));
    } else {
      summarize(probe_report);
      report.parts.push_back(std::move(probe_report));
    }
  }
  summarize(report);
  return report;
}

// Largest violation among failing reports.
double failing_margin(std::initializer_list<const CheckReport*> reports) {
  double m = 0.0;
  for (const auto* r : reports)
    if (!r->passed) m = std::max(m, r->worst_violation);
  return m;
}

}  // namespace

void CheckConfig::validate() const {
  if (trials < 1 || rounds < 1 || outcomes < 1) throw StructuralError("CheckConfig: counts must be at least 1");
  if (!(tol > 0.0)) throw StructuralError("CheckConfig: tol must be positive");
  if (dims.empty()) throw StructuralError("CheckConfig: no dimension profiles");
  for (const auto& d : dims) {
    if (d.size() < 2) throw StructuralError("CheckConfig: profile " + dims_string(d) + " needs two labs");
    for (auto k : d)
      if (k == 0) throw StructuralError("CheckConfig: zero dimension in profile " + dims_string(d));
  }
  if (ensemble_sizes.empty()) throw StructuralError("CheckConfig: no ensemble sizes");
  for (auto s : ensemble_sizes)
    if (s < 1) throw StructuralError("CheckConfig: ensemble sizes must be at least 1");
}

CheckConfig CheckConfig::defaults_for(const MeasureHandle& f) {
  CheckConfig cfg;
  if (!f.exact) {
    cfg.trials = 10;
    cfg.tol = 5e-3;
    cfg.dims = {{2, 2}, {2, 3}};
  }
  return cfg;
}

CheckReport check_convexity(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("convexity"), f, cfg);
}
CheckReport check_lui(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("lui"), f, cfg);
}
CheckReport check_ancilla_invariance(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("ancilla"), f, cfg);
}
CheckReport check_flags(const MeasureHandle& f, const CheckConfig& cfg) {
  auto r = run_spec(spec_for("flags"), f, cfg);
  if (f.declared_convex) r.note = "flagged/le is implied by convexity";
  return r;
}
CheckReport check_flag_equivalence(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("flag-equivalence"), f, cfg);
}
CheckReport check_vidal(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("vidal"), f, cfg);
}
CheckReport check_strong_monotonicity(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("strong-monotonicity"), f, cfg);
}
CheckReport check_weak_monotonicity(const MeasureHandle& f, const CheckConfig& cfg) {
  return run_spec(spec_for("weak-monotonicity"), f, cfg);
}

std::vector<std::string> check_names() {
  return {"convexity", "lui",   "ancilla",           "flags",
          "flag-equivalence", "vidal", "strong-monotonicity", "weak-monotonicity"};
}

CheckReport run_check(std::string_view name, const MeasureHandle& f, const CheckConfig& cfg) {
  if (name == "flags") return check_flags(f, cfg);
  return run_spec(spec_for(name), f, cfg);
}

double replay(const MeasureHandle& f, const CheckConfig& cfg, const Witness& w) {
  const auto spec = spec_for(w.check);
  const auto probe = std::find_if(spec.probes.begin(), spec.probes.end(),
                                  [&](const Probe& p) { return p.name == w.probe; });
  if (probe == spec.probes.end()) throw StructuralError("replay: unknown probe '" + w.probe + "'");
  if (w.trial >= 0 && probe->random == nullptr)
    throw StructuralError("replay: probe '" + w.probe + "' has no random trials");
  if (w.trial < 0 && static_cast<std::size_t>(-w.trial) > probe->constructed.size())
    throw StructuralError("replay: no constructed instance " + std::to_string(w.trial));
  Recorder rec;
  for (const auto& [name, v] : run_trial(f, cfg, spec, *probe, w.profile, w.trial, rec))
    if (name == w.part) return v;
  throw StructuralError("replay: part '" + w.part + "' not produced");
}

const CheckReport* Certification::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Certification certify_measure(const MeasureHandle& f, const CheckConfig& cfg) {
  std::vector<CheckReport> checks;
  for (const auto& name : check_names()) checks.push_back(run_check(name, f, cfg));
  return assess(f.name, std::move(checks), cfg.tol);
}

Certification assess(std::string measure, std::vector<CheckReport> checks, double tol) {
  Certification c;
  c.measure = std::move(measure);
  c.checks = std::move(checks);
  for (const auto& name : check_names())
    if (c.find(name) == nullptr) throw StructuralError("assess: missing check '" + name + "'");

  const auto& convexity = *c.find("convexity");
  const auto& lui = *c.find("lui");
  const auto& flags = *c.find("flags");
  const auto& vidal = *c.find("vidal");
  const auto& strong = *c.find("strong-monotonicity");
  const auto& weak = *c.find("weak-monotonicity");

  c.theorem_applicable = convexity.passed;
  c.predicted_monotone = convexity.passed && lui.passed && flags.passed;
  c.direct_monotone = vidal.passed && strong.passed;

  // Failures within twice the tolerance are borderline on both sides.
  const double combined = 2.0 * tol;
  if (c.predicted_monotone && !c.direct_monotone) {
    const double m = failing_margin({&vidal, &strong});
    if (m > combined)
      c.inconsistencies.push_back("predicted monotone but direct checks fail (violation " +
                                  std::to_string(m) + ")");
  }
  if (!c.predicted_monotone && c.direct_monotone) {
    const double m = failing_margin({&convexity, &lui, &flags});
    if (m > combined)
      c.inconsistencies.push_back("predicted non-monotone but direct checks pass (violation " +
                                  std::to_string(m) + ")");
  }
  if (convexity.passed && strong.passed && !weak.passed && weak.worst_violation > combined)
    c.inconsistencies.push_back("convex and strongly monotone but weak monotonicity fails");
  c.consistent = c.inconsistencies.empty();
  return c;
}

bool matches_expectation(const MeasureHandle& f, const Certification& c) {
  return c.consistent && c.predicted_monotone == f.expected_monotone;
}

}  // namespace entmon
