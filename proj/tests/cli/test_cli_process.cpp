// SPDX-License-Identifier: Apache-2.0
//
// Runs the gmot executable and checks exit codes and error prefixes.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string err;
};

class Tool : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("gmot_tool_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(GMOT_TOOL_PATH) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }

  fs::path dir_;
};

TEST_F(Tool, SynthThenAlign) {
  ASSERT_EQ(run("synth --seed 1 --la 16 --lt 4 --dim 5 --out " + path("data")).code, 0);
  const Outcome r = run("align --acoustic " + path("data/acoustic.csv") + " --linguistic " +
                        path("data/linguistic.csv") + " --preset setting4 --format bin --out " + path("out"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "coupling.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "coupling.bin"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "diagnostics.json"));
}

TEST_F(Tool, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("align --acoustic x.csv").code, 2);
  const Outcome preset = run("align --acoustic a --linguistic b --preset setting0");
  EXPECT_EQ(preset.code, 2);
  EXPECT_EQ(preset.err.rfind("usage error:", 0), 0u) << preset.err;
  EXPECT_EQ(run("synth --la 2 --lt 3 --dim 4 --out " + path("s")).code, 2);
  EXPECT_EQ(run("sweep --acoustic a --linguistic b --out " + path("s")).code, 2);
}

TEST_F(Tool, IoErrorNamesPath) {
  const Outcome r = run("align --acoustic " + path("missing.csv") + " --linguistic " + path("missing.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("io error:", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
}

TEST_F(Tool, ShapeError) {
  write("a.csv", "1,0\n0,1\n");
  write("b.csv", "1,0,0\n");
  const Outcome r = run("align --acoustic " + path("a.csv") + " --linguistic " + path("b.csv"));
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(r.err.rfind("shape error:", 0), 0u) << r.err;
}

TEST_F(Tool, DomainError) {
  write("a.csv", "1,0\n0,1\n");
  const Outcome r = run("align --acoustic " + path("a.csv") + " --linguistic " + path("a.csv") + " --beta -1");
  EXPECT_EQ(r.code, 5);
  EXPECT_EQ(r.err.rfind("domain error:", 0), 0u) << r.err;
  write("z.csv", "0,0\n1,1\n");
  EXPECT_EQ(run("align --acoustic " + path("z.csv") + " --linguistic " + path("a.csv")).code, 5);
}

TEST_F(Tool, SizeError) {
  write("a.csv", "1,0\n");
  write("c.csv", "1\n");
  const Outcome r = run("project --coupling " + path("c.csv") + " --source " + path("a.csv") + " --target " +
                        path("a.csv") + " --out " + path("p"));
  EXPECT_EQ(r.code, 6);
  EXPECT_EQ(r.err.rfind("size error:", 0), 0u) << r.err;
}

}  // namespace
