#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "bddcls/bench.hpp"
#include "bddcls/cli.hpp"
#include "bddcls/selfcheck.hpp"
#include "bddcls/solver.hpp"

using namespace bddcls;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("bddcls_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string &name, const std::string &content) const {
    auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  const fs::path &path() const { return path_; }

private:
  fs::path path_;
};

std::vector<std::string> lines_with(const std::string &text, const std::string &prefix) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0)
      out.push_back(line.substr(prefix.size()));
  return out;
}

Assignment parse_v_literals(const std::string &body, int n) {
  Assignment b(static_cast<std::size_t>(n), 0);
  std::istringstream in(body);
  for (int lit; in >> lit && lit != 0;)
    b[static_cast<std::size_t>(std::abs(lit) - 1)] = lit > 0 ? -1 : 1;
  return b;
}

} // namespace

TEST(CliSolve, PlantedCardsInstance) {
  TempDir dir;
  GenSpec s;
  s.family = Family::Cards;
  s.n = 50;
  s.r_p = 0.5;
  s.r_v = 0.2;
  s.plant = true;
  s.seed = 5;
  Formula f = generate(s).formula;
  auto path = dir.file("inst.hbf", to_hybrid(f));
  auto r = run_cli({"solve", path, "--seed", "1"});
  ASSERT_EQ(r.code, cli::kExitSat) << r.err;
  EXPECT_EQ(lines_with(r.out, "s ").at(0), "SATISFIABLE");
  auto v = lines_with(r.out, "v ");
  ASSERT_EQ(v.size(), 1u);
  Formula again = cli::load_formula(path);
  Assignment b = parse_v_literals(v[0], again.num_vars);
  std::vector<double> ones(again.size(), 1.0);
  EXPECT_TRUE(check_formula(again, b, ones).unsatisfied.empty());
  EXPECT_FALSE(lines_with(r.out, "c stats").empty());
}

TEST(CliSolve, TimeoutOnHardInstance) {
  TempDir dir;
  Rng rng(3);
  std::ostringstream cnf;
  cnf << "p cnf 200 1400\n";
  for (int i = 0; i < 1400; ++i) {
    for (const auto &l : random_constraint(rng, 200, 3, ConstraintKind::Clause).literals)
      cnf << l.to_signed() << ' ';
    cnf << "0\n";
  }
  auto path = dir.file("hard.cnf", cnf.str());
  auto r = run_cli({"solve", path, "--timeout", "0.01", "--seed", "2"});
  EXPECT_EQ(r.code, cli::kExitUnknown) << r.err;
  EXPECT_EQ(lines_with(r.out, "s ").at(0), "UNKNOWN");
}

TEST(CliSolve, MalformedInputIsError) {
  TempDir dir;
  auto path = dir.file("bad.hbf", "p hbf 2 1\n1 3 0\n");
  auto r = run_cli({"solve", path});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run_cli({"solve", (dir.path() / "missing.hbf").string()}).code, cli::kExitError);
  EXPECT_EQ(run_cli({"solve", path, "--restarts", "x"}).code, cli::kExitError);
  EXPECT_EQ(run_cli({}).code, cli::kExitError);
}

TEST(CliSolve, MaxSatCostLinesStrictlyDecrease) {
  TempDir dir;
  Rng rng(4);
  std::ostringstream w;
  w << "p wcnf 14 60 1000\n";
  for (int i = 0; i < 60; ++i) {
    w << 1 + rng.below(5);
    for (const auto &l : random_constraint(rng, 14, 2, ConstraintKind::Clause).literals)
      w << ' ' << l.to_signed();
    w << " 0\n";
  }
  auto path = dir.file("m.wcnf", w.str());
  auto r = run_cli({"solve", path, "--seed", "3", "--restarts", "10"});
  ASSERT_EQ(r.code, cli::kExitSat) << r.err;
  auto o = lines_with(r.out, "o ");
  ASSERT_FALSE(o.empty());
  for (std::size_t i = 1; i < o.size(); ++i)
    EXPECT_LT(std::stod(o[i]), std::stod(o[i - 1]));
  auto v = lines_with(r.out, "v ");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].size(), 14u);
  EXPECT_EQ(v[0].find_first_not_of("01"), std::string::npos);
}

TEST(CliSolve, OmittedSeedIsPrinted) {
  TempDir dir;
  auto path = dir.file("one.hbf", "p hbf 2 1\n1 2 0\n");
  auto r = run_cli({"solve", path});
  auto seed = lines_with(r.out, "c seed ");
  ASSERT_EQ(seed.size(), 1u);
  auto again = run_cli({"solve", path, "--seed", seed[0]});
  EXPECT_EQ(lines_with(again.out, "v "), lines_with(r.out, "v "));
}

TEST(CliGenerate, WritesFilesAndManifest) {
  TempDir dir;
  auto out = (dir.path() / "g").string();
  auto r = run_cli({"generate", "--family", "cards", "--n", "50", "--rp", "0.5", "--rv", "0.2",
                    "--count", "10", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  int hbf = 0;
  for (const auto &e : fs::directory_iterator(out))
    hbf += e.path().extension() == ".hbf";
  EXPECT_EQ(hbf, 10);
  std::ifstream mf(fs::path(out) / "manifest.json");
  auto j = nlohmann::json::parse(mf);
  EXPECT_EQ(j["instances"].size(), 10u);
  EXPECT_FALSE(j["instances"][0].contains("hidden_assignment"));
}

TEST(CliGenerate, PlantedManifestHasHiddenAssignment) {
  TempDir dir;
  auto out = (dir.path() / "p").string();
  auto r = run_cli({"generate", "--family", "xor_card", "--n", "30", "--rx", "0.3", "--plant",
                    "--count", "2", "--seed", "9", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream mf(fs::path(out) / "manifest.json");
  auto j = nlohmann::json::parse(mf);
  ASSERT_EQ(j["instances"].size(), 2u);
  for (const auto &entry : j["instances"]) {
    auto lits = entry["hidden_assignment"].get<std::vector<int>>();
    ASSERT_EQ(lits.size(), 30u);
    Assignment b(30);
    for (int l : lits)
      b[static_cast<std::size_t>(std::abs(l) - 1)] = l > 0 ? -1 : 1;
    Formula f = cli::load_formula((fs::path(out) / entry["file"].get<std::string>()).string());
    std::vector<double> ones(f.size(), 1.0);
    EXPECT_TRUE(check_formula(f, b, ones).unsatisfied.empty());
  }
}

TEST(CliGenerate, InvalidDensityIsError) {
  TempDir dir;
  auto r = run_cli({"generate", "--family", "cards", "--rp", "-0.5", "--out",
                    (dir.path() / "x").string()});
  EXPECT_EQ(r.code, cli::kExitError);
  r = run_cli({"generate", "--family", "cards", "--rv", "1.5", "--out", (dir.path() / "x").string()});
  EXPECT_EQ(r.code, cli::kExitError);
}

TEST(CliStats, Ratios) {
  TempDir dir;
  auto single = run_cli({"stats", dir.file("s.hbf", "p hbf 3 1\nx 1 2 3 0\n")});
  ASSERT_EQ(single.code, 0);
  EXPECT_EQ(lines_with(single.out, "reduction_ratio ").at(0), "1.00");

  auto dup = run_cli({"stats", dir.file("d.hbf", "p hbf 3 3\n1 -2 0\n1 -2 0\n1 -2 0\n")});
  EXPECT_EQ(lines_with(dup.out, "reduction_ratio ").at(0), "3.00");

  auto cnf = run_cli({"stats", dir.file("c.wcnf", "p wcnf 4 4 10\n10 1 2 0\n1 -1 3 0\n2 2 3 4 0\n"
                                                   "1 -4 0\n")});
  ASSERT_EQ(cnf.code, 0);
  auto ratio = lines_with(cnf.out, "reduction_ratio ").at(0);
  EXPECT_GE(std::stod(ratio), 1.0);
  EXPECT_EQ(ratio.size(), 4u);
  EXPECT_FALSE(lines_with(cnf.out, "kind clause").empty());
}

TEST(CliSelfcheck, PassesAndReproduces) {
  auto a = run_cli({"selfcheck", "--seed", "17", "--cases", "10"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(lines_with(a.out, "FAIL").size(), 0u);
  EXPECT_EQ(lines_with(a.out, "PASS").size(), 4u);
  auto b = run_cli({"selfcheck", "--seed", "17", "--cases", "10"});
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSelfcheck, InjectedFaultFails) {
  auto r = run_cli({"selfcheck", "--seed", "1", "--cases", "5", "--inject-fault"});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(lines_with(r.out, "FAIL").empty());
}

TEST(CliFormatting, LiteralsAndBits) {
  Assignment b{-1, 1, -1};
  EXPECT_EQ(cli::format_literals(b), "1 -2 3 0");
  EXPECT_EQ(cli::format_bits(b), "101");
}
