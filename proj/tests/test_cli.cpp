#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / ("mop_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  fs::path p = scratch() / (name + ".json");
  std::ofstream(p) << j.dump();
  return p;
}

nlohmann::json r1_json() { return {{"name", "R1"}, {"alpha", "1"}, {"a", "1"}, {"b", "2"}}; }
nlohmann::json r0_json() { return {{"name", "R0"}, {"alpha", "1"}, {"a", "1"}, {"b", "cbrt(2)"}}; }

struct CliResult {
  int code;
  std::string err;
};

CliResult mop(const std::string& args) {
  static int counter = 0;
  fs::path err = scratch() / ("stderr_" + std::to_string(counter++));
  std::string cmd = std::string(MOP_CLI_PATH) + " " + args + " > /dev/null 2> " + err.string();
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const std::vector<std::string> kCheckIds = {
    "structure_degree_roots", "recurrence_positive", "recurrence_residual", "recurrence_routes",
    "second_kind_zero_counts", "second_kind_sign_law", "psi_orthogonality", "interlacing_P", "interlacing_Phi",
    "tail_equal_0_2", "tail_equal_3_5", "tail_sum_relation", "tail_order_4_1", "relation_residuals", "distinct_limits",
    "beta_gamma_residual", "beta_gamma_order", "beta_gamma_symmetric", "cubic_residual", "branch_product",
    "psi1_asymptote", "boundary_laws", "omega1_formula_vs_boundary", "delta_a_cross", "ratio_surface_error",
    "ratio_surface_monotone", "equilibrium_variational", "equilibrium_grid_stability", "potential_ratio_identity",
    "nth_root", "norm_trend", "h_limit"};

nlohmann::json check(const nlohmann::json& report, const std::string& id) {
  for (const auto& c : report["checks"])
    if (c["id"] == id) return c;
  return nullptr;
}

}  // namespace

TEST(Compute, WritesThreeTablesWithRecurrenceRows) {
  const fs::path out = scratch() / "r1_compute";
  ASSERT_EQ(mop("compute --config " + write_config("r1", r1_json()).string() + " --out " + out.string()).code, 0);
  for (const char* f : {"polys.csv", "recurrence.csv", "second_kind.csv"}) EXPECT_TRUE(fs::exists(out / f)) << f;
  auto rec = lines(out / "recurrence.csv");
  ASSERT_EQ(rec.size(), 60u);  // header + n = 2..60
  for (int n = 2; n <= 60; ++n) EXPECT_EQ(rec[n - 1].substr(0, rec[n - 1].find(',')), std::to_string(n));
  // Q_{3k} has k zeros per ray: the reduced row for n = 3k lists k roots.
  for (const auto& l : lines(out / "polys.csv")) {
    if (l[0] == 'n') continue;
    std::stringstream ss(l);
    std::string n, deg, coeffs, roots;
    std::getline(ss, n, ',');
    std::getline(ss, deg, ',');
    std::getline(ss, coeffs, ',');
    std::getline(ss, roots, ',');
    std::stringstream rs(roots);
    int count = 0;
    for (std::string r; rs >> r;) ++count;
    EXPECT_EQ(count, std::stoi(n) / 3) << n;
  }
}

TEST(Compute, ByteIdenticalReruns) {
  auto j = r1_json();
  j["n_max"] = 24;
  const auto cfg = write_config("r1_small", j).string();
  const fs::path a = scratch() / "det_a", b = scratch() / "det_b";
  ASSERT_EQ(mop("compute --config " + cfg + " --out " + a.string()).code, 0);
  ASSERT_EQ(mop("compute --config " + cfg + " --out " + b.string()).code, 0);
  for (const char* f : {"polys.csv", "recurrence.csv", "second_kind.csv"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Compute, OverridesApply) {
  const fs::path out = scratch() / "override";
  ASSERT_EQ(mop("compute --config " + write_config("r1o", r1_json()).string() + " --out " + out.string() +
                " --nmax 90 --precision 320")
                .code,
            0);
  EXPECT_EQ(lines(out / "recurrence.csv").size(), 90u);
}

TEST(ConfigErrors, MissingAlphaNamesTheKey) {
  auto j = r1_json();
  j.erase("alpha");
  CliResult r = mop("compute --config " + write_config("noalpha", j).string() + " --out " + (scratch() / "x").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("alpha"), std::string::npos) << r.err;
}

TEST(ConfigErrors, IntervalOrder) {
  auto j = r1_json();
  j["b"] = "0.5";
  CliResult r = mop("compute --config " + write_config("order", j).string() + " --out " + (scratch() / "x").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("interval order"), std::string::npos) << r.err;
}

TEST(ConfigErrors, ZeroSecondWeightRejected) {
  auto j = r1_json();
  j["s2"] = {{"scale", "0"}};
  CliResult r = mop("verify --config " + write_config("s2zero", j).string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("identically zero"), std::string::npos) << r.err;
}

TEST(ConfigErrors, UnreadableFileAndBadFlags) {
  EXPECT_EQ(mop("compute --config /nonexistent.json --out " + (scratch() / "x").string()).code, 2);
  EXPECT_EQ(mop("frobnicate").code, 2);
}

TEST(Plot, EmptyDirectoryFails) {
  const fs::path d = scratch() / "empty";
  fs::create_directories(d);
  EXPECT_NE(mop("plot " + d.string()).code, 0);
}

TEST(Plot, PartialArtifactsGivePartialScripts) {
  const fs::path d = scratch() / "partial";
  fs::create_directories(d);
  fs::copy_file(scratch() / "r1_compute" / "recurrence.csv", d / "recurrence.csv", fs::copy_options::overwrite_existing);
  ASSERT_EQ(mop("plot --out " + d.string()).code, 0);
  std::set<std::string> got;
  for (const auto& e : fs::directory_iterator(d / "plots")) got.insert(e.path().filename().string());
  EXPECT_EQ(got, std::set<std::string>{"recurrence_tails.py"});
}

TEST(Verify, R1ReportCarriesEveryCheckOnce) {
  const fs::path out = scratch() / "r1_verify";
  CliResult r = mop("verify --config " + write_config("r1v", r1_json()).string() + " --out " + out.string());
  auto rep = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(r.code, rep["all_pass"].get<bool>() ? 0 : 1);
  std::multiset<std::string> ids;
  for (const auto& c : rep["checks"]) ids.insert(c["id"].get<std::string>());
  for (const auto& id : kCheckIds) EXPECT_EQ(ids.count(id), 1u) << id;
  EXPECT_EQ(ids.size(), kCheckIds.size());
  auto d = check(rep, "delta_a_cross");
  ASSERT_FALSE(d.is_null());
  EXPECT_LT(std::stod(d["measured"].get<std::string>()), 2e-2);
  for (const char* f : {"ratios.csv", "limits.json", "surface.json", "branches.csv", "equilibrium.csv", "equilibrium.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
}

TEST(Verify, R0SymmetricCheckPassesAndOutputsAreDeterministic) {
  const auto cfg = write_config("r0v", r0_json()).string();
  const fs::path a = scratch() / "r0_a", b = scratch() / "r0_b";
  mop("verify --config " + cfg + " --out " + a.string());
  mop("verify --config " + cfg + " --out " + b.string());
  auto rep = nlohmann::json::parse(slurp(a / "report.json"));
  auto s = check(rep, "beta_gamma_symmetric");
  ASSERT_FALSE(s.is_null());
  EXPECT_TRUE(s["pass"].get<bool>());
  EXPECT_TRUE(s["applicable"].get<bool>());
  for (const auto& e : fs::directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path().filename();
  }
}

TEST(Verify, PlotScriptsRunOnFullArtifacts) {
  const fs::path d = scratch() / "r1_verify";
  ASSERT_TRUE(fs::exists(d / "report.json")) << "runs after Verify.R1ReportCarriesEveryCheckOnce";
  ASSERT_EQ(mop("plot " + d.string()).code, 0);
  const char* names[] = {"star_zeros", "recurrence_tails", "equilibrium_densities", "ratio_curves"};
  for (const char* n : names) EXPECT_TRUE(fs::exists(d / "plots" / (std::string(n) + ".py"))) << n;
  if (std::system("python3 -c 'import matplotlib' > /dev/null 2>&1") != 0) GTEST_SKIP() << "matplotlib unavailable";
  for (const char* n : names) {
    std::string cmd = "python3 " + (d / "plots" / (std::string(n) + ".py")).string() + " > /dev/null 2>&1";
    EXPECT_EQ(std::system(cmd.c_str()), 0) << n;
    EXPECT_TRUE(fs::exists(d / "plots" / (std::string(n) + ".png"))) << n;
  }
}
