#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "qspec/cli.hpp"
#include "support/oracles.hpp"

using namespace qspec;
using namespace qspec::testing;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
};

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" QSPEC_CLI_PATH "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) { return std::string("\"") + QSPEC_SAMPLES_DIR + "/" + name + "\""; }

Json parsed(const CliRun& r) {
  auto j = Json::parse(r.out);
  j.erase("wall_time_s");
  return j;
}

QMatrix matrix_field(const Json& j) { return j.get<QMatrix>(); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("qspec_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, SpectrumOfSamples) {
  const CliRun t1 = run_cli("spectrum -i " + sample("T1.json"));
  ASSERT_EQ(t1.exit_code, 0) << t1.out;
  const Json j1 = parsed(t1);
  EXPECT_EQ(j1["command"], "spectrum");
  EXPECT_EQ(j1["input_digest"].get<std::string>().size(), 16u);
  const auto& s1 = j1["results"]["spectrum"]["spheres"];
  ASSERT_EQ(s1.size(), 2u);
  EXPECT_NEAR(s1[0]["s0"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(s1[0]["s1"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(s1[1]["s0"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(j1["results"]["spectrum"]["margins"].size(), 2u);

  const Json jz = parsed(run_cli("spectrum -i " + sample("zero.json")));
  ASSERT_EQ(jz["results"]["spectrum"]["spheres"].size(), 1u);
  EXPECT_EQ(jz["results"]["spectrum"]["spheres"][0]["s0"], 0.0);
  EXPECT_EQ(jz["results"]["spectrum"]["spheres"][0]["s1"], 0.0);

  const Json j3 = parsed(run_cli("spectrum -i " + sample("T3.json")));
  const auto& s3 = j3["results"]["spectrum"]["spheres"];
  ASSERT_EQ(s3.size(), 2u);
  EXPECT_NEAR(s3[0]["s0"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(s3[1]["s0"].get<double>(), 1.0, 1e-12);

  const Json tol = parsed(run_cli("spectrum --tol 1e-3 -i " + sample("T1.json")));
  EXPECT_EQ(tol["results"]["spectrum"]["tol"], 1e-3);
}

TEST(Cli, ApplySamples) {
  const CliRun sq = run_cli("apply -i " + sample("T3.json") + " -f " + sample("square.json"));
  ASSERT_EQ(sq.exit_code, 0) << sq.out;
  EXPECT_LE(max_entry_distance(matrix_field(parsed(sq)["results"]["f_of_T"]), QMatrix::identity(2)), 1e-10);

  const CliRun one = run_cli("apply -i " + sample("T1.json") + " -f " + sample("one.json"));
  ASSERT_EQ(one.exit_code, 0);
  EXPECT_LE(max_entry_distance(matrix_field(parsed(one)["results"]["f_of_T"]), QMatrix::identity(2)), 1e-10);

  const CliRun cube = run_cli("apply -i " + sample("T1.json") + " -f " + sample("cube.json") + " --verify-plane");
  ASSERT_EQ(cube.exit_code, 0) << cube.out;
  const Json jc = parsed(cube);
  EXPECT_LE(max_entry_distance(matrix_field(jc["results"]["f_of_T"]), QMatrix::diagonal({1.0, -Quaternion::j()})), 1e-10);
  EXPECT_TRUE(jc["checks"][0]["pass"].get<bool>());
  EXPECT_EQ(jc["diagnostics"]["nodes_per_circle"].size(), jc["results"]["contour"]["circles"].size());

  const CliRun planed = run_cli("apply -i " + sample("T1.json") + " -f " + sample("exp12.json") + " --plane 0,1,1 --clearance 0.2");
  ASSERT_EQ(planed.exit_code, 0) << planed.out;
  const Json jp = parsed(planed);
  EXPECT_NEAR(jp["results"]["contour"]["plane"][2].get<double>(), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(jp["results"]["contour"]["clearance"], 0.2);
}

TEST(Cli, RadiusTooSmallIsInputError) {
  const CliRun r = run_cli("apply -i " + sample("T1.json") + " -f " + sample("geometric.json"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(parsed(r)["error"], "RadiusTooSmall");
}

TEST(Cli, Project) {
  const CliRun r = run_cli("project -i " + sample("T1.json") + " --select 1");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const Json j = parsed(r);
  EXPECT_LE(max_entry_distance(matrix_field(j["results"]["projector"]), QMatrix::diagonal({1.0, 0.0})), 1e-10);
  EXPECT_EQ(j["results"]["moments"].size(), 4u);

  const CliRun both = run_cli("project -i " + sample("T1.json") + " --select 0,1");
  ASSERT_EQ(both.exit_code, 0);
  EXPECT_LE(max_entry_distance(matrix_field(parsed(both)["results"]["projector"]), QMatrix::identity(2)), 1e-10);

  EXPECT_EQ(run_cli("project -i " + sample("T1.json") + " --select 5").exit_code, 2);
  EXPECT_EQ(run_cli("project -i " + sample("T1.json") + " --select 1 --clearance 2").exit_code, 2);
}

TEST(Cli, Resolvent) {
  const CliRun r = run_cli("resolvent -i " + sample("T1.json") + " -s '[3,0,0,0]'");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const QMatrix got = matrix_field(parsed(r)["results"]["resolvent"]);
  EXPECT_LE(max_entry_distance(got, s_resolvent_partial_sum(3.0, example_t1(), 50)), 1e-12);

  const CliRun on = run_cli("resolvent -i " + sample("T1.json") + " -s '[0,0,1,0]'");
  EXPECT_EQ(on.exit_code, 1);
  EXPECT_EQ(parsed(on)["error"], "NumericalError");

  EXPECT_EQ(run_cli("resolvent -i " + sample("T1.json") + " -s '[0,1]'").exit_code, 2);
}

TEST(Cli, VerifyT1) {
  const CliRun r = run_cli("verify -i " + sample("T1.json"));
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const Json j = parsed(r);
  EXPECT_TRUE(j["all_pass"].get<bool>());
  std::set<std::string> names;
  for (const auto& c : j["checks"]) names.insert(c["name"].get<std::string>());
  for (const char* want : {"resolvent_equation", "q_m_identity", "monomial_reproduction", "plane_independence",
                           "projector_idempotent", "projector_sum_identity", "projector_first_moment",
                           "projector_power_moments"}) {
    EXPECT_TRUE(names.count(want)) << want;
  }
  bool found = false;
  for (const auto& p : j["results"]["projectors"]) {
    if (p["spheres"] == Json::array({1})) {
      found = true;
      EXPECT_LE(max_entry_distance(matrix_field(p["projector"]), QMatrix::diagonal({1.0, 0.0})), 1e-9);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, VerifyRandomIsDeterministic) {
  const CliRun a = run_cli("verify --random 4 --seed 42");
  const CliRun b = run_cli("verify --random 4 --seed 42");
  ASSERT_EQ(a.exit_code, 0) << a.out;
  EXPECT_EQ(parsed(a).dump(), parsed(b).dump());
  EXPECT_EQ(parsed(a)["input_digest"], "random:4:42");
  const CliRun c = run_cli("verify --random 4 --seed 43");
  EXPECT_NE(parsed(a)["results"]["spectrum"].dump(), parsed(c)["results"]["spectrum"].dump());
}

TEST(Cli, ApplyIsDeterministic) {
  const CliRun a = run_cli("apply -i " + sample("T3.json") + " -f " + sample("exp12.json"));
  const CliRun b = run_cli("apply -i " + sample("T3.json") + " -f " + sample("exp12.json"));
  EXPECT_EQ(parsed(a).dump(), parsed(b).dump());
}

TEST(Cli, VerifyReportsOversizedClearance) {
  const CliRun r = run_cli("verify -i " + sample("T2.json") + " --clearance 5");
  EXPECT_EQ(r.exit_code, 1);
  const Json j = parsed(r);
  EXPECT_FALSE(j["all_pass"].get<bool>());
  bool surfaced = false;
  for (const auto& c : j["checks"]) surfaced = surfaced || (c.contains("error") && c["error"] == "ClearanceTooLarge");
  EXPECT_TRUE(surfaced) << r.out;

  EXPECT_EQ(run_cli("verify -i " + sample("T2.json")).exit_code, 0);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run_cli("spectrum -i /nonexistent/file.json").exit_code, 2);
  EXPECT_EQ(run_cli("spectrum -i " + temp_file("bad.json", "{\"n\": 2, \"entries\": [")).exit_code, 2);
  EXPECT_EQ(run_cli("spectrum").exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
  EXPECT_EQ(run_cli("apply -i " + sample("T1.json") + " -f " + sample("one.json") + " --plane 0,0,0").exit_code, 2);
  EXPECT_EQ(run_cli("apply -i " + sample("T1.json") + " -f " + sample("one.json") + " --plane a,b").exit_code, 2);
  EXPECT_EQ(run_cli("spectrum -i " + sample("T1.json") + " --tol -1").exit_code, 2);
  EXPECT_EQ(run_cli("verify").exit_code, 2);
  EXPECT_EQ(run_cli("verify -i " + sample("T1.json") + " --random 3").exit_code, 2);
}

TEST(Cli, NodeCapFromEnvironment) {
  const std::string args = "apply -i " + sample("T1.json") + " -f " + sample("exp12.json");
  EXPECT_EQ(run_cli(args, "QSPEC_MAX_NODES=32").exit_code, 1);
  const CliRun ok = run_cli(args, "QSPEC_MAX_NODES=4096");
  ASSERT_EQ(ok.exit_code, 0);
  for (const auto& n : parsed(ok)["diagnostics"]["nodes_per_circle"]) EXPECT_LE(n.get<int>(), 4096);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "qspec_test_out.json";
  std::filesystem::remove(path);
  const CliRun r = run_cli("spectrum -i " + sample("T2.json") + " -o " + path.string());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["results"]["spectrum"]["spheres"][0]["mult"], 2);
}

TEST(CliLibrary, Helpers) {
  EXPECT_EQ(cli::digest(""), "cbf29ce484222325");
  EXPECT_EQ(cli::digest("a"), "af63dc4c8601ec8c");
  const SSpectrum sp = s_spectrum(example_t1());
  EXPECT_DOUBLE_EQ(cli::auto_clearance(sp), 0.5);
  EXPECT_NEAR(cli::auto_clearance(sp, 1.5), 0.225, 1e-15);
  const Contour c = cli::choose_contour(s_spectrum(example_t2()), ImaginaryUnit::i(), std::nullopt);
  EXPECT_EQ(c.circles.size(), 2u);

  cli::JobConfig config;
  config.command = cli::Command::spectrum;
  config.input_path = QSPEC_SAMPLES_DIR "/T3.json";
  const cli::Report rep = cli::run(config);
  EXPECT_EQ(rep.exit_code, 0);
  EXPECT_TRUE(rep.body.contains("wall_time_s"));
}
