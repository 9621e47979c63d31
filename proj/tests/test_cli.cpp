#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("liberation_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Invocation run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(LIBERATION_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                            err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EvolveEqualZeroTracesFirstMomentDecays) {
  const Invocation r = run("evolve --init equal --alpha 0 --beta 0 --t-end 2 --moments 4 --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir_ / "trajectory.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,f1,f2,f3,f4");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    double t, f1;
    char comma;
    ss >> t >> comma >> f1;
    EXPECT_NEAR(f1, std::exp(-t), 1e-8);
    ++rows;
  }
  EXPECT_GT(rows, 10);
  EXPECT_TRUE(fs::exists(dir_ / "density_t2.csv"));
}

TEST_F(Cli, MissingFieldNamesIt) {
  const Invocation r = run("evolve --beta 0.1 --out " + dir_.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("evolve.alpha"), std::string::npos) << r.err;
}

TEST_F(Cli, ConfigFileSectionsAndTypeErrors) {
  std::ofstream(dir_ / "c.json") << R"({"alpha": 0.2, "beta": -0.4, "stationary": {"points": "many"}})";
  const Invocation bad = run("--config " + (dir_ / "c.json").string() + " stationary --out " + dir_.string());
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("stationary.points"), std::string::npos) << bad.err;
  const Invocation ok = run("--config " + (dir_ / "c.json").string() + " stationary --points 100 --out " + dir_.string());
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(fs::exists(dir_ / "stationary.json"));
  EXPECT_TRUE(fs::exists(dir_ / "stationary_density.csv"));
}

TEST_F(Cli, OutOfRangeTraceIsAValidationError) {
  EXPECT_EQ(run("stationary --alpha 1.5 --beta 0").code, 1);
  EXPECT_EQ(run("no-such-command").code, 1);
}

TEST_F(Cli, FlowWritesDeviationColumn) {
  const Invocation r = run("flow --alpha 0.2 --beta -0.4 --init free --t-end 1 --seeds 0.3 -0.5 --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir_ / "flow.csv");
  EXPECT_EQ(csv.rfind("t,z0_re,z0_im,phi_re,phi_im,h_re,h_im,alive,closed_form_deviation", 0), 0u);
  EXPECT_TRUE(fs::exists(dir_ / "domain.csv"));
}

TEST_F(Cli, OracleIsDeterministicGivenSeed) {
  const std::string args = "oracle --alpha 0.2 --beta -0.4 --N 16 --n-samples 3 --t-grid 0.5 --seed 9 --out ";
  ASSERT_EQ(run(args + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(run(args + (dir_ / "b").string()).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "monte_carlo.csv"), slurp(dir_ / "b" / "monte_carlo.csv"));
  EXPECT_NE(slurp(dir_ / "a" / "comparison.csv").find("z_score"), std::string::npos);
}

TEST_F(Cli, VerifyPassesAndCatchesACorruptedConstant) {
  const Invocation ok = run("verify --only 9 13 --out " + dir_.string());
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("tol"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "verify.json"));

  const Invocation bad = run("verify --only 10 --inject-fault binom --out " + dir_.string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("binomial moment relation"), std::string::npos) << bad.out;
}
