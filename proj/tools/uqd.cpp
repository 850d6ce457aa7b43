// uqd: command-line front end. Reports are JSON on stdout, logs on stderr.
//
// Exit codes: 0 success or verdict holds, 1 verdict fails, 2 usage error or
// unreadable input, 3 numerical, validation or parse error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "uqd/json_io.hpp"
#include "uqd/models.hpp"
#include "uqd/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uqd;

namespace {

enum Exit { kOk = 0, kVerdictFails = 1, kUsage = 2, kNumeric = 3 };

/// Usage problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  double atol = 1e-10;
  double rtol = 1e-10;
  std::uint64_t seed = 0;
  std::string out;
  bool quiet = false;
  bool pretty = false;
  unsigned threads = 0;

  Tolerance tol() const { return Tolerance(atol, rtol); }
};

Globals g;

void log(const std::string& msg) {
  if (!g.quiet) std::cerr << "uqd: " << msg << '\n';
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
  f << text;
}

void emit(const json& doc) { emit_text(doc.dump(g.pretty ? 2 : -1) + "\n", g.out); }

Representation load(const std::string& path) {
  Representation rep = load_representation(path);
  require_valid(rep, g.tol());
  return rep;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": malformed JSON: " + e.what());
  }
}

/// "2,1" -> {1, 0}
std::vector<std::size_t> parse_permutation(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("permutation entry '" + item + "' is not an integer");
    }
    if (v < 1 || item.find_first_not_of(" ", pos) != std::string::npos) {
      throw UsageError("permutation entries are 1-based integers, got '" + item + "'");
    }
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  if (out.empty()) throw UsageError("empty permutation");
  return out;
}

std::optional<std::vector<std::size_t>> optional_perm(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_permutation(text);
}

PureState parse_psi0(const std::string& spec, int dim) {
  const bool numeric = !spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos;
  if (numeric) {
    const int index = std::stoi(spec);
    if (index >= dim) {
      throw UsageError("--psi0 index " + spec + " outside the basis of dimension " +
                       std::to_string(dim));
    }
    return PureState::basis(dim, index);
  }
  const json doc = load_json(spec);
  const CVector v = json_io::decode_vector(doc.is_object() ? doc.at("amplitudes") : doc, spec);
  if (v.size() != dim) throw ParseError(spec + ": state dimension does not match representation");
  return PureState(v);
}

// ---- reports built here ----------------------------------------------------

json partition_json(const Representation& rep, const SjedPartition& part) {
  json blocks = json::array();
  for (std::size_t a = 0; a < part.block_count(); ++a) {
    const SjedBlock& block = part.blocks[a];
    json b;
    b["index"] = a + 1;
    b["jumps"] = json_io::one_based(block.indices);
    if (block.is_reset()) {
      const auto& r = block.reset();
      b["kind"] = "reset";
      b["chi"] = json_io::encode(r.chi);
      b["gamma"] = json_io::encode(r.gamma);
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(r.gamma, Eigen::EigenvaluesOnly);
      json ev = json::array();
      for (Eigen::Index i = eig.eigenvalues().size() - 1; i >= 0; --i) ev.push_back(eig.eigenvalues()(i));
      b["gamma_eigenvalues"] = ev;
    } else {
      const auto& n = block.non_reset();
      b["kind"] = "non_reset";
      b["lambda"] = n.lambda;
      b["j_canonical"] = json_io::encode(n.j_canonical);
    }
    b["minimal_size"] = minimal_block_representation(block, g.tol()).size();
    blocks.push_back(std::move(b));
  }
  std::size_t minimal = 0;
  for (const auto& b : blocks) minimal += b["minimal_size"].get<std::size_t>();
  return {{"label", rep.label},
          {"dim", rep.dim()},
          {"n_jumps", rep.jump_count()},
          {"d_C", part.block_count()},
          {"minimal_jump_count", minimal},
          {"blocks", blocks}};
}

json representation_json(const Representation& rep) { return json::parse(serialize(rep, -1)); }

// ---- subcommands -----------------------------------------------------------

struct CheckArgs {
  std::string rep_a, rep_b, level = "t1", perm_c;
  bool all_perms = false;
  std::size_t max_perms = 10000;
};

int run_check(const CheckArgs& args) {
  const Representation a = load(args.rep_a);
  const Representation b = load(args.rep_b);
  const Level level = parse_level(args.level);
  CheckOptions opts;
  opts.perm_c = optional_perm(args.perm_c);
  opts.all_perms = args.all_perms;
  opts.max_matchings = args.max_perms;
  const EquivalenceReport report = check_equivalence(a, b, g.tol(), opts);
  json doc = to_json(report);
  doc["rep_a"] = a.label;
  doc["rep_b"] = b.label;
  doc["level"] = to_string(level);
  doc["holds"] = report.holds(level);
  emit(doc);
  if (g.pretty) {
    log("level " + to_string(level) + (report.holds(level) ? " holds" : " fails"));
    for (const auto& d : report.diagnostics) log("  " + d);
  }
  return report.holds(level) ? kOk : kVerdictFails;
}

int run_sjed(const std::string& path) {
  const Representation rep = load(path);
  const SjedPartition part = partition(rep, g.tol());
  emit(partition_json(rep, part));
  if (g.pretty) log(std::to_string(part.block_count()) + " SJEDs over " + std::to_string(rep.jump_count()) + " jumps");
  return kOk;
}

int run_minimize(const std::string& path) {
  const Representation rep = load(path);
  const Representation min = minimize_representation(rep, g.tol());
  emit(representation_json(min));
  if (g.pretty) log(std::to_string(rep.jump_count()) + " -> " + std::to_string(min.jump_count()) + " jumps");
  return kOk;
}

int run_gauge_apply(const std::string& rep_min_path, const std::string& iso_path, double shift) {
  const Representation rep_min = load(rep_min_path);
  const BlockIsometry iso = block_isometry_from_json(load_json(iso_path));
  emit(representation_json(apply_gauge(rep_min, iso, shift, g.tol())));
  return kOk;
}

int run_gauge_extract(const std::string& rep_min_path, const std::string& rep_path) {
  const Representation rep_min = load(rep_min_path);
  const Representation rep = load(rep_path);
  try {
    emit(to_json(extract_isometry(rep_min, rep, g.tol())));
  } catch (const EquivalenceError& e) {
    log(e.what());
    return kVerdictFails;
  }
  return kOk;
}

struct SimulateArgs {
  std::string rep, psi0 = "0";
  double tmax = 1.0;
  std::size_t ntraj = 1;
  std::vector<double> sample_times;
};

int run_simulate(const SimulateArgs& args) {
  const Representation rep = load(args.rep);
  const PureState psi0 = parse_psi0(args.psi0, rep.dim());
  SimulationOptions opts;
  opts.sample_times = args.sample_times;
  const unsigned threads = resolve_threads(g.threads);
  log("simulating " + std::to_string(args.ntraj) + " trajectories on " + std::to_string(threads) +
      " threads");
  const auto ens = simulate_ensemble(rep, psi0, args.tmax, args.ntraj, g.seed, opts, threads);

  std::size_t jumps = 0;
  for (const auto& t : ens) jumps += t.events.size();
  json manifest{{"label", rep.label},
                {"dim", rep.dim()},
                {"n_jumps", rep.jump_count()},
                {"n_trajectories", ens.size()},
                {"t_max", args.tmax},
                {"master_seed", g.seed},
                {"initial_state", json_io::encode(psi0)},
                {"total_events", jumps},
                {"representation", representation_json(rep)}};
  if (g.out.empty()) {
    json traj = json::array();
    for (const auto& t : ens) traj.push_back(to_json(t));
    manifest["trajectories"] = std::move(traj);
    emit_text(manifest.dump(g.pretty ? 2 : -1) + "\n", "");
    return kOk;
  }
  fs::create_directories(g.out);
  const fs::path records = fs::path(g.out) / "trajectories.jsonl";
  std::ofstream f(records);
  if (!f) throw std::system_error(errno, std::generic_category(), "cannot write " + records.string());
  for (const auto& t : ens) f << to_json(t).dump() << '\n';
  manifest["records"] = "trajectories.jsonl";
  const std::string text = manifest.dump(2) + "\n";
  emit_text(text, (fs::path(g.out) / "manifest.json").string());
  emit_text(manifest.dump(g.pretty ? 2 : -1) + "\n", "");
  return kOk;
}

struct CompareArgs {
  std::string rep_a, rep_b, level = "t1", perm, observables, psi0 = "0";
  std::size_t ntraj = 1000;
  double tmax = 1.0;
  double alpha = 0.01;
  std::optional<std::uint64_t> seed_a, seed_b;
  std::vector<double> times;
};

int run_compare(const CompareArgs& args) {
  const Representation a = load(args.rep_a);
  const Representation b = load(args.rep_b);
  if (a.dim() != b.dim()) throw UsageError("representations act on different dimensions");
  const Level level = parse_level(args.level);
  if (level == Level::Qme) throw UsageError("--level must be t1, t2 or t3");
  const auto observables = args.observables.empty()
                               ? basis_projectors(a.dim())
                               : parse_observables(load_json(args.observables), a.dim());
  std::vector<double> times = args.times;
  if (times.empty()) times = {args.tmax / 4, args.tmax / 2, args.tmax};
  const PureState psi0 = parse_psi0(args.psi0, a.dim());
  const std::uint64_t sa = args.seed_a.value_or(g.seed);
  const std::uint64_t sb = args.seed_b.value_or(g.seed + 1);
  if (sa == sb) log("warning: both ensembles use seed " + std::to_string(sa));
  const unsigned threads = resolve_threads(g.threads);
  log("simulating 2 x " + std::to_string(args.ntraj) + " trajectories");
  const Ensemble ea{a, simulate_ensemble(a, psi0, args.tmax, args.ntraj, sa, {}, threads), args.tmax};
  const Ensemble eb{b, simulate_ensemble(b, psi0, args.tmax, args.ntraj, sb, {}, threads), args.tmax};
  const auto perm = optional_perm(args.perm);
  const EnsembleComparison cmp =
      compare_ensembles(ea, eb, observables, times, level, perm, args.alpha, g.tol());

  CheckOptions opts;
  if (level == Level::T3) opts.perm_c = perm;
  const EquivalenceReport algebraic = check_equivalence(a, b, g.tol(), opts);
  json doc = to_json(cmp);
  doc["seed_a"] = sa;
  doc["seed_b"] = sb;
  doc["n_trajectories"] = args.ntraj;
  doc["t_max"] = args.tmax;
  doc["algebraic"] = {{"level", to_string(level)}, {"holds", algebraic.holds(level)}, {"report", to_json(algebraic)}};
  emit(doc);
  if (g.pretty) {
    log(std::string("statistical verdict: ") + (cmp.verdict() ? "pass" : "fail") +
        ", algebraic verdict: " + (algebraic.holds(level) ? "holds" : "fails"));
  }
  return cmp.verdict() ? kOk : kVerdictFails;
}

int run_rate_scan(const std::string& pa, const std::string& pb, std::size_t n,
                  const std::string& perm_c) {
  const Representation a = load(pa);
  const Representation b = load(pb);
  if (a.dim() != b.dim()) throw UsageError("representations act on different dimensions");
  const RateFieldReport report = rate_field_scan(a, b, optional_perm(perm_c), n, g.seed, g.tol());
  json doc = to_json(report);
  doc["seed"] = g.seed;
  emit(doc);
  return kOk;
}

struct ExampleArgs {
  std::string model, variant;
  models::QutritParams q;
  models::TwoResetParams t;
  bool degrees = false;
};

int run_example(ExampleArgs args) {
  const double unit = args.degrees ? std::numbers::pi / 180.0 : 1.0;
  Representation rep;
  if (args.model == "qutrit-a") {
    args.q.theta *= unit;
    args.q.vartheta *= unit;
    args.q.phi *= unit;
    const std::string v = args.variant.empty() ? "full" : args.variant;
    if (v == "full") rep = models::qutrit_full(args.q);
    else if (v == "minimal") rep = models::qutrit_minimal(args.q);
    else throw UsageError("qutrit-a variants: full, minimal");
  } else {
    args.t.theta *= unit;
    const std::string v = args.variant.empty() ? "base" : args.variant;
    if (v == "base") rep = models::two_reset(args.t);
    else if (v == "tilde") rep = models::two_reset_tilde(args.t);
    else throw UsageError("qutrit-b variants: base, tilde");
  }
  require_valid(rep, g.tol());
  emit(representation_json(rep));
  return kOk;
}

int run_fig1(const models::QutritParams& p, int points) {
  if (points < 2) throw UsageError("--points must be at least 2");
  const Representation full = models::qutrit_full(p);
  const Representation minimal = models::qutrit_minimal(p);
  std::ostringstream csv;
  csv.precision(12);
  csv << "# |psi> = cos(el)cos(az)|0> + cos(el)sin(az)|1> + sin(el)|2>, angles in radians\n";
  csv << "az,el,r1,r2,r3,r4,r5,rp1,rp2,rp3,A1,A2,Ap1,Ap2\n";
  const double pi = std::numbers::pi;
  for (int i = 0; i < points; ++i) {
    const double az = 2.0 * pi * i / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double el = -0.5 * pi + pi * j / (points - 1);
      CVector v(3);
      v << std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el);
      const PureState psi(v);
      double r[5];
      double rp[3];
      for (std::size_t k = 0; k < 5; ++k) r[k] = jump_rate(full, k, psi);
      for (std::size_t k = 0; k < 3; ++k) rp[k] = jump_rate(minimal, k, psi);
      csv << az << ',' << el;
      for (double x : r) csv << ',' << x;
      for (double x : rp) csv << ',' << x;
      csv << ',' << r[0] + r[1] + r[2] << ',' << r[3] + r[4] << ',' << rp[0] + rp[1] << ',' << rp[2]
          << '\n';
    }
  }
  emit_text(csv.str(), g.out);
  if (!g.out.empty()) log("wrote " + g.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-level equivalence of quantum master equation representations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  app.add_option("--atol", g.atol, "Absolute tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--rtol", g.rtol, "Relative tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Write the report to this file (simulate: output directory)");
  app.add_flag("--quiet", g.quiet, "Suppress log output on stderr");
  app.add_flag("--pretty", g.pretty, "Indent JSON and print a human summary on stderr");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores; UQD_THREADS overrides)");

  std::function<int()> action;

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Decide equivalence of two representations");
  c->add_option("--rep-a", check.rep_a, "First representation (H, J)")->required();
  c->add_option("--rep-b", check.rep_b, "Second representation (H~, J~)")->required();
  c->add_option("--level", check.level, "qme | t1 | t2 | t3")
      ->check(CLI::IsMember({"qme", "t1", "t2", "t3"}));
  c->add_option("--perm-c", check.perm_c, "Forced block permutation for t3, 1-based, e.g. \"2,1\"");
  c->add_flag("--all-perms", check.all_perms, "Enumerate every labelled matching");
  c->add_option("--max-perms", check.max_perms, "Cap for --all-perms")->check(CLI::PositiveNumber);
  c->callback([&] { action = [&] { return run_check(check); }; });

  std::string sjed_path;
  auto* s = app.add_subcommand("sjed", "Partition jump operators into SJEDs");
  s->add_option("rep", sjed_path, "Representation file")->required();
  s->callback([&] { action = [&] { return run_sjed(sjed_path); }; });

  std::string min_path;
  auto* m = app.add_subcommand("minimize", "Minimal representation, SJED by SJED");
  m->add_option("rep", min_path, "Representation file")->required();
  m->callback([&] { action = [&] { return run_minimize(min_path); }; });

  std::string gauge_min, gauge_iso, gauge_rep;
  double gauge_shift = 0.0;
  auto* gauge = app.add_subcommand("gauge", "Block-isometry gauge transformations");
  gauge->require_subcommand(1);
  auto* ga = gauge->add_subcommand("apply", "J_j = sum_k V_jk J'_k and H + r");
  ga->add_option("--rep-min", gauge_min, "Minimal representation")->required();
  ga->add_option("--isometry", gauge_iso, "Block isometry JSON")->required();
  ga->add_option("--shift", gauge_shift, "Hamiltonian shift r");
  ga->callback([&] { action = [&] { return run_gauge_apply(gauge_min, gauge_iso, gauge_shift); }; });
  auto* ge = gauge->add_subcommand("extract", "Recover V from a minimal and a general representation");
  ge->add_option("--rep-min", gauge_min, "Minimal representation")->required();
  ge->add_option("--rep", gauge_rep, "Representation to explain")->required();
  ge->callback([&] { action = [&] { return run_gauge_extract(gauge_min, gauge_rep); }; });

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Simulate labelled quantum trajectories");
  si->add_option("rep", sim.rep, "Representation file")->required();
  si->add_option("--psi0", sim.psi0, "Basis index or JSON file of amplitudes");
  si->add_option("--tmax", sim.tmax, "Time horizon")->check(CLI::PositiveNumber);
  si->add_option("--ntraj", sim.ntraj, "Number of trajectories")->check(CLI::PositiveNumber);
  si->add_option("--sample-times", sim.sample_times, "Record the state at these times");
  si->callback([&] { action = [&] { return run_simulate(sim); }; });

  CompareArgs cmp;
  std::uint64_t seed_a = 0, seed_b = 0;
  auto* ce = app.add_subcommand("compare-ensembles", "Statistical comparison of simulated ensembles");
  ce->add_option("--rep-a", cmp.rep_a, "First representation")->required();
  ce->add_option("--rep-b", cmp.rep_b, "Second representation")->required();
  ce->add_option("--level", cmp.level, "t1 | t2 | t3")->check(CLI::IsMember({"t1", "t2", "t3"}));
  ce->add_option("--perm", cmp.perm, "Label permutation (b onto a), 1-based");
  ce->add_option("--ntraj", cmp.ntraj, "Trajectories per ensemble")->check(CLI::PositiveNumber);
  ce->add_option("--tmax", cmp.tmax, "Time horizon")->check(CLI::PositiveNumber);
  ce->add_option("--times", cmp.times, "Observation times (default tmax/4, tmax/2, tmax)");
  ce->add_option("--observables", cmp.observables, "Observables JSON (default basis projectors)");
  ce->add_option("--psi0", cmp.psi0, "Basis index or JSON file of amplitudes");
  ce->add_option("--alpha", cmp.alpha, "Family-wise significance")->check(CLI::Range(1e-12, 0.5));
  auto* opt_sa = ce->add_option("--seed-a", seed_a, "Master seed of the first ensemble (default --seed)");
  auto* opt_sb = ce->add_option("--seed-b", seed_b, "Master seed of the second ensemble (default --seed + 1)");
  ce->callback([&] {
    if (opt_sa->count() > 0) cmp.seed_a = seed_a;
    if (opt_sb->count() > 0) cmp.seed_b = seed_b;
    action = [&] { return run_compare(cmp); };
  });

  std::string scan_a, scan_b, scan_perm;
  std::size_t scan_n = 1000;
  auto* rs = app.add_subcommand("rate-scan", "Pointwise comparison of rates and block actions");
  rs->add_option("--rep-a", scan_a, "First representation")->required();
  rs->add_option("--rep-b", scan_b, "Second representation")->required();
  rs->add_option("--n", scan_n, "Number of Haar-random states")->check(CLI::PositiveNumber);
  rs->add_option("--perm-c", scan_perm, "Block permutation, 1-based (default: closest match per state)");
  rs->callback([&] { action = [&] { return run_rate_scan(scan_a, scan_b, scan_n, scan_perm); }; });

  ExampleArgs ex;
  auto* e = app.add_subcommand("example", "Emit a reference representation");
  e->add_option("model", ex.model, "qutrit-a | qutrit-b")
      ->required()
      ->check(CLI::IsMember({"qutrit-a", "qutrit-b"}));
  e->add_option("--variant", ex.variant, "qutrit-a: full | minimal; qutrit-b: base | tilde");
  e->add_flag("--degrees", ex.degrees, "Angles are given in degrees");
  e->add_option("--theta", ex.q.theta, "Mixing angle theta");
  e->add_option("--vartheta", ex.q.vartheta, "Dephasing split angle");
  e->add_option("--phi", ex.q.phi, "Dephasing phase");
  e->add_option("--gamma", ex.q.gamma, "Reset rate")->check(CLI::PositiveNumber);
  e->add_option("--lambda", ex.q.lambda, "Dephasing strength")->check(CLI::PositiveNumber);
  e->add_option("--omega", ex.q.omega, "Drive amplitude");
  e->add_option("--gamma1", ex.t.gamma1, "qutrit-b rate gamma1")->check(CLI::PositiveNumber);
  e->add_option("--gamma2", ex.t.gamma2, "qutrit-b rate gamma2")->check(CLI::PositiveNumber);
  e->add_option("--gamma3", ex.t.gamma3, "qutrit-b rate gamma3")->check(CLI::PositiveNumber);
  e->add_option("--gamma1-tilde", ex.t.gamma1_tilde, "qutrit-b tilde rate")->check(CLI::PositiveNumber);
  e->add_option("--gamma2-tilde", ex.t.gamma2_tilde, "qutrit-b tilde rate")->check(CLI::PositiveNumber);
  e->callback([&] {
    ex.t.theta = ex.q.theta;
    ex.t.omega = ex.q.omega;
    action = [&] { return run_example(ex); };
  });

  models::QutritParams fig;
  int fig_points = 61;
  auto* f = app.add_subcommand("fig1", "CSV of jump rates over real qutrit states");
  f->add_option("--points", fig_points, "Grid points per angle");
  f->add_option("--theta", fig.theta, "Mixing angle theta (radians)");
  f->add_option("--vartheta", fig.vartheta, "Dephasing split angle (radians)");
  f->add_option("--gamma", fig.gamma, "Reset rate")->check(CLI::PositiveNumber);
  f->add_option("--lambda", fig.lambda, "Dephasing strength")->check(CLI::PositiveNumber);
  f->callback([&] { action = [&] { return run_fig1(fig, fig_points); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex_help) {
    return app.exit(ex_help);
  } catch (const CLI::CallForAllHelp& ex_help) {
    return app.exit(ex_help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& err) {
    std::cerr << "uqd: usage error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::system_error& err) {
    std::cerr << "uqd: " << err.what() << '\n';
    return kUsage;
  } catch (const EquivalenceError& err) {
    std::cerr << "uqd: " << err.what() << '\n';
    return kVerdictFails;
  } catch (const std::invalid_argument& err) {
    // Bad permutations and similar caller-supplied values.
    std::cerr << "uqd: usage error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "uqd: error: " << err.what() << '\n';
    return kNumeric;
  }
}
