#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using quiverloop::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "quiverloop");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kTwoVertex = QUIVERLOOP_DATA_DIR "/two_vertex.json";

}  // namespace

TEST(Cli, ValidateWorkedExample) {
  const Result r = invoke({"validate", kTwoVertex});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("N=16\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("o_v: U(3)x4 U(2)x2"), std::string::npos) << r.out;
}

TEST(Cli, ExpandWorkedExample) {
  const Result r = invoke({"expand", kTwoVertex});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("constant: 30 N"), std::string::npos) << r.out;
}

TEST(Cli, LoopEquationOnTriangle) {
  const Result r = invoke({"loopeq", "builtin:triangle", "--root", "e1", "--loop", "e1+ e2+ e3+"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "<tr1 tr[e1+ e2+ e3+]> = 1/5 <tr[e1+ e2+ e3+ e1+ e2+ e3+]> - 1/5 <tr1>\n");
}

TEST(Cli, GwwSingleRow) {
  const Result r = invoke({"gww", "--dim", "1", "--xmin", "0", "--xmax", "0", "--points", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "x,Z,y\n0,1,0\n");
}

TEST(Cli, BootstrapOrderTwoStripe) {
  const Result r = invoke({"bootstrap", "builtin:triangle", "--max-order", "2", "--grid", "1,1,1,-1.5,1.5,3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "x,y,max_feasible_order,first_failing_order\n"
            "1,-1.5,1,2\n"
            "1,0,2,\n"
            "1,1.5,1,2\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"validate"}).code, 2);
  EXPECT_EQ(invoke({"gww", "--dim", "abc"}).code, 2);
  EXPECT_EQ(invoke({"validate", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(invoke({"loopeq", kTwoVertex, "--root", "nope"}).code, 1);
  EXPECT_EQ(invoke({"validate", kTwoVertex, "--x", "0.3"}).code, 1);
  EXPECT_EQ(invoke({"gww", "--dim", "0"}).code, 1);
  EXPECT_EQ(invoke({"bootstrap", kTwoVertex}).code, 1);
}

TEST(Cli, HelpEverywhere) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  for (const char* sub : {"validate", "expand", "loopeq", "bootstrap", "gww", "mc"}) {
    const Result r = invoke({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
  }
}

TEST(Cli, McIsReproducible) {
  const std::vector<std::string> args = {"mc", "builtin:triangle", "--samples", "2000", "--seed", "9"};
  const Result a = invoke(args), b = invoke(args);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"estimate\""), std::string::npos) << a.out;
}

TEST(Cli, WritesOutputFile) {
  const fs::path dir = fs::temp_directory_path() / "quiverloop_cli_test";
  fs::create_directories(dir);
  const fs::path out = dir / "expand.json";
  const Result r = invoke({"expand", kTwoVertex, "--json", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  std::stringstream s;
  s << in.rdbuf();
  EXPECT_EQ(s.str().front(), '{');
  fs::remove_all(dir);
}
