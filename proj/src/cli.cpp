#include "bddcls/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>

#include "bddcls/bdd.hpp"
#include "bddcls/bench.hpp"
#include "bddcls/selfcheck.hpp"
#include "bddcls/solver.hpp"

namespace bddcls::cli {

namespace fs = std::filesystem;

Formula load_formula(const std::string &path, std::string format) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (format.empty()) {
    const auto ext = fs::path(path).extension().string();
    if (ext == ".cnf")
      format = "cnf";
    else if (ext == ".wcnf")
      format = "wcnf";
    else
      format = "hbf";
  }
  if (format == "hbf")
    return parse_hybrid(text);
  if (format == "cnf")
    return parse_dimacs_cnf(text);
  if (format == "wcnf")
    return parse_wcnf(text);
  throw std::invalid_argument("unknown format '" + format + "'");
}

std::string format_literals(const Assignment &b) {
  std::string s;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const int var = static_cast<int>(i) + 1;
    s += std::to_string(b[i] < 0 ? var : -var);
    s += ' ';
  }
  s += '0';
  return s;
}

std::string format_bits(const Assignment &b) {
  std::string s(b.size(), '0');
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i] < 0)
      s[i] = '1';
  return s;
}

namespace {

std::string format_number(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15)
    return std::to_string(static_cast<long long>(x));
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// All output passes through here so concurrent reports do not interleave.
class Writer {
public:
  explicit Writer(std::ostream &out) : out_(out) {}
  void line(const std::string &s) {
    std::lock_guard lock(mu_);
    out_ << s << '\n';
  }
  void flush() {
    std::lock_guard lock(mu_);
    out_.flush();
  }

private:
  std::ostream &out_;
  std::mutex mu_;
};

struct SolveArgs {
  std::string input;
  std::string format;
  std::string mode;
  std::optional<std::uint64_t> seed;
  double timeout = std::numeric_limits<double>::infinity();
  int restarts = 100;
  int trials = 8;
  double weight_factor = 2.0;
  int roundings = 10;
  int threads = 1;
  double grad_tol = 1e-8;
  double step_init = 1.0;
  int max_iters = 0;
  bool verbose = false;
};

int run_solve(const SolveArgs &a, std::ostream &out) {
  Formula f = load_formula(a.input, a.format);
  SolverConfig cfg;
  if (!a.mode.empty())
    cfg.mode = a.mode == "maxsat" ? Mode::MaxSat : Mode::Sat;
  else
    cfg.mode = f.has_soft() ? Mode::MaxSat : Mode::Sat;
  cfg.restarts = a.restarts;
  cfg.trials_per_restart = a.trials;
  cfg.weight_factor = a.weight_factor;
  cfg.roundings = a.roundings;
  cfg.threads = a.threads;
  cfg.timeout = a.timeout;
  cfg.optimizer.grad_tol = a.grad_tol;
  cfg.optimizer.step_init = a.step_init;
  cfg.optimizer.max_iters = a.max_iters;

  Writer w(out);
  if (a.seed) {
    cfg.seed = *a.seed;
  } else {
    std::random_device rd;
    cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  w.line("c seed " + std::to_string(cfg.seed));
  w.line("c mode " + std::string(to_string(cfg.mode)) + " vars " + std::to_string(f.num_vars) +
         " constraints " + std::to_string(f.size()));
  cfg.validate();

  SolveCallbacks cb;
  if (cfg.mode == Mode::MaxSat)
    cb.on_improvement = [&](double cost, const Assignment &) { w.line("o " + format_number(cost)); };
  if (a.verbose)
    cb.on_trial = [&](const TrialLog &t) {
      std::ostringstream os;
      os << "c trial restart=" << t.restart << " trial=" << t.trial
         << " start=" << (t.start_from_optimum ? "local_optimum" : "x0")
         << " value=" << format_number(t.value) << " target=" << format_number(t.target)
         << " iters=" << t.iters << " stop=" << to_string(t.reason)
         << " unsat=" << t.unsatisfied;
      w.line(os.str());
    };

  Solution s = solve(f, cfg, cb);

  if (s.status == Status::SatFound) {
    w.line("s SATISFIABLE");
    w.line("v " + (cfg.mode == Mode::MaxSat ? format_bits(*s.assignment)
                                             : format_literals(*s.assignment)));
  } else {
    w.line("s UNKNOWN");
  }
  std::ostringstream stats;
  stats << "c stats restarts=" << s.restarts_used << " trials=" << s.trials_used
        << " gradient_calls=" << s.gradient_calls << " value_calls=" << s.value_calls
        << " bdd_nodes=" << s.bdd_nodes << " best_objective=" << format_number(s.best_objective);
  if (cfg.mode == Mode::MaxSat)
    stats << " best_cost=" << (std::isfinite(s.best_cost) ? format_number(s.best_cost) : "inf");
  w.line(stats.str());
  w.line("c stats target_hits=" + std::to_string(s.target_hits) +
         " target_rounding_failures=" + std::to_string(s.target_rounding_failures) +
         " timed_out=" + (s.timed_out ? "1" : "0"));
  std::ostringstream tm;
  tm << "c stats wall_time=" << std::fixed << std::setprecision(3) << s.wall_time << "s";
  w.line(tm.str());
  w.flush();
  return s.status == Status::SatFound ? kExitSat : kExitUnknown;
}

struct GenerateArgs {
  GenSpec spec;
  std::string family = "cards";
  int coef_type = 1;
  std::string out_dir = ".";
  bool grid = false;
};

int run_generate(GenerateArgs a, std::ostream &out) {
  const Family family = parse_family(a.family);
  if (a.coef_type != 1 && a.coef_type != 2)
    throw std::invalid_argument("--coef-type must be 1 or 2");

  std::vector<GenSpec> specs;
  if (a.grid) {
    specs = appendix_grid(family);
    if (family == Family::Pbs && a.coef_type == 2)
      std::erase_if(specs, [](const GenSpec &s) { return s.coef_mode == CoefMode::PerOccurrence; });
    for (auto &s : specs) {
      s.seed = a.spec.seed;
      s.plant = a.spec.plant;
      s.count = a.spec.count;
    }
  } else {
    a.spec.family = family;
    a.spec.coef_mode = a.coef_type == 1 ? CoefMode::PerOccurrence : CoefMode::PerVariable;
    specs.push_back(a.spec);
  }
  for (const auto &s : specs)
    s.validate();

  fs::create_directories(a.out_dir);
  nlohmann::json manifest;
  manifest["seed"] = a.spec.seed;
  manifest["instances"] = nlohmann::json::array();
  int written = 0;
  for (const auto &s : specs) {
    for (int idx = 0; idx < s.count; ++idx) {
      Instance inst = generate(s, idx);
      const auto name = instance_file_name(s, idx);
      std::ofstream file(fs::path(a.out_dir) / name, std::ios::binary);
      if (!file)
        throw std::runtime_error("cannot write '" + name + "'");
      file << to_hybrid(inst.formula);
      if (!file)
        throw std::runtime_error("write failed for '" + name + "'");

      nlohmann::json entry = {{"file", name},
                              {"family", to_string(s.family)},
                              {"n", s.n},
                              {"r_c", s.r_c},
                              {"r_x", s.r_x},
                              {"r_p", s.r_p},
                              {"delta", s.delta},
                              {"r_v", s.r_v},
                              {"clause_len", s.clause_len},
                              {"coef_type", s.coef_mode == CoefMode::PerOccurrence ? 1 : 2},
                              {"index", idx},
                              {"seed", inst.seed},
                              {"constraints", inst.formula.size()},
                              {"planted", s.plant}};
      if (inst.hidden) {
        std::vector<int> lits;
        for (std::size_t i = 0; i < inst.hidden->size(); ++i)
          lits.push_back((*inst.hidden)[i] < 0 ? static_cast<int>(i) + 1 : -static_cast<int>(i) - 1);
        entry["hidden_assignment"] = lits;
      }
      manifest["instances"].push_back(std::move(entry));
      ++written;
    }
  }
  std::ofstream mf(fs::path(a.out_dir) / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  if (!mf)
    throw std::runtime_error("cannot write manifest.json");
  out << "c wrote " << written << " instances to " << a.out_dir << '\n';
  return 0;
}

std::string ratio_text(double r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << r;
  return os.str();
}

int run_stats(const std::string &input, const std::string &format, std::ostream &out) {
  Formula f = load_formula(input, format);
  MrBdd bdd = build_formula(f);
  BddStats s = stats(bdd);
  out << "vars " << f.num_vars << '\n';
  out << "constraints " << f.size() << '\n';
  out << "shared_nodes " << s.shared_nodes << '\n';
  out << "sum_individual_nodes " << s.sum_individual_nodes << '\n';
  out << "reduction_ratio " << ratio_text(s.reduction_ratio) << '\n';
  out << "size_measure " << bdd.size_measure() << '\n';
  for (auto kind : {ConstraintKind::Clause, ConstraintKind::Xor, ConstraintKind::Nae,
                    ConstraintKind::Card, ConstraintKind::Pb}) {
    auto count = std::count_if(f.constraints.begin(), f.constraints.end(),
                               [&](const Constraint &c) { return c.kind == kind; });
    if (count == 0)
      continue;
    BddStats k = stats_for(bdd, f, kind);
    out << "kind " << to_string(kind) << " constraints " << count << " shared_nodes "
        << k.shared_nodes << " sum_individual_nodes " << k.sum_individual_nodes
        << " reduction_ratio " << ratio_text(k.reduction_ratio) << '\n';
  }
  return 0;
}

int run_selfcheck_cmd(const SelfCheckOptions &opt, std::ostream &out) {
  out << "c selfcheck seed " << opt.seed << " cases " << opt.cases << '\n';
  bool ok = true;
  for (const auto &s : run_selfcheck(opt)) {
    const bool pass = s.failures == 0;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << s.name << " cases=" << s.cases
        << " failures=" << s.failures << " max_error=" << std::scientific << std::setprecision(3)
        << s.max_error << " tol=" << s.tolerance << std::defaultfloat << '\n';
  }
  return ok ? 0 : kExitError;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Continuous local search over shared BDDs for hybrid SAT and MaxSAT"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto *solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("input", sa.input, "instance file")->required();
  solve_cmd->add_option("--format", sa.format, "input format")
      ->check(CLI::IsMember({"hbf", "cnf", "wcnf"}));
  solve_cmd->add_option("--mode", sa.mode, "sat or maxsat")->check(CLI::IsMember({"sat", "maxsat"}));
  solve_cmd->add_option("--seed", sa.seed, "random seed (default: drawn from entropy)");
  solve_cmd->add_option("--timeout", sa.timeout, "seconds")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--restarts", sa.restarts, "random restarts J")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--trials", sa.trials, "trials per restart T")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--weight-factor", sa.weight_factor, "weight multiplier r (> 1)");
  solve_cmd->add_option("--roundings", sa.roundings, "randomized roundings K per trial")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--threads", sa.threads, "worker threads")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--grad-tol", sa.grad_tol, "projected step tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--step-init", sa.step_init, "initial step (largest coordinate move)")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iters", sa.max_iters, "optimizer iterations per trial (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_flag("--verbose", sa.verbose, "log every trial");

  GenerateArgs ga;
  auto *gen_cmd = app.add_subcommand("generate", "generate random hybrid benchmarks");
  gen_cmd->add_option("--family", ga.family, "cnf_xor, xor_card, cards or pbs")
      ->check(CLI::IsMember({"cnf_xor", "xor_card", "cards", "pbs"}));
  gen_cmd->add_option("--n", ga.spec.n, "variables");
  gen_cmd->add_option("--rc", ga.spec.r_c, "clause density");
  gen_cmd->add_option("--rx", ga.spec.r_x, "XOR density");
  gen_cmd->add_option("--rp", ga.spec.r_p, "cardinality/PB density");
  gen_cmd->add_option("--delta", ga.spec.delta, "cardinality threshold fraction");
  gen_cmd->add_option("--rv", ga.spec.r_v, "variable density per cardinality/PB constraint");
  gen_cmd->add_option("--k", ga.spec.clause_len, "clause length");
  gen_cmd->add_option("--coef-type", ga.coef_type, "PB coefficients: 1 per occurrence, 2 per variable");
  gen_cmd->add_option("--count", ga.spec.count, "instances per parameter point");
  gen_cmd->add_option("--seed", ga.spec.seed, "random seed");
  gen_cmd->add_flag("--plant", ga.spec.plant, "plant a hidden solution");
  gen_cmd->add_flag("--grid", ga.grid, "emit the full parameter grid of the family");
  gen_cmd->add_option("--out", ga.out_dir, "output directory");

  std::string stats_input, stats_format;
  auto *stats_cmd = app.add_subcommand("stats", "print shared-BDD node statistics");
  stats_cmd->add_option("input", stats_input, "instance file")->required();
  stats_cmd->add_option("--format", stats_format, "input format")
      ->check(CLI::IsMember({"hbf", "cnf", "wcnf"}));

  SelfCheckOptions so;
  auto *check_cmd = app.add_subcommand("selfcheck", "run oracle-equivalence suites");
  check_cmd->add_option("--seed", so.seed, "random seed");
  check_cmd->add_option("--cases", so.cases, "random instances")->check(CLI::PositiveNumber);
  check_cmd->add_flag("--inject-fault", so.inject_fault)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*solve_cmd)
      return run_solve(sa, out);
    if (*gen_cmd)
      return run_generate(ga, out);
    if (*stats_cmd)
      return run_stats(stats_input, stats_format, out);
    if (*check_cmd)
      return run_selfcheck_cmd(so, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

} // namespace bddcls::cli
