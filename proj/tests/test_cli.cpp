#include "oracles.hpp"

#include "boolperc/io/json.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace boolperc;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("boolperc-cli-" + std::to_string(getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static oracle::Run cli(const std::string& args) {
    return oracle::run(std::string(BOOLPERC_CLI) + " " + args + " 2>/dev/null");
  }

  static std::vector<std::string> rows(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string s; std::getline(in, s);)
      if (!s.empty()) out.push_back(s);
    return out;
  }

  static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> f;
    std::istringstream in(line);
    for (std::string s; std::getline(in, s, ',');) f.push_back(s);
    return f;
  }

  fs::path dir_;
};

const char* kDiskLaw = R"({"family": "fixed", "body": {"kind": "ball", "center": [0, 0], "radius": 1}})";

std::string config(const std::string& law, const std::string& u, const std::string& side, int replicas,
                   const std::string& extra = "") {
  return std::string(R"({"version": 1, "law": )") + law + R"(, "grid": {"u": )" + u + R"(, "L": )" + side +
         R"(}, "replicas": )" + std::to_string(replicas) + R"(, "seed": 5)" + extra + "}";
}

}  // namespace

TEST_F(Cli, ClassifyFamily) {
  const auto r = cli("classify --family long-short --d 2 --m 1 --alpha 1.5");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("Sparse, Robust (witness k=1)"), std::string::npos) << r.out;
}

TEST_F(Cli, ClassifyExplicitProfile) {
  const auto r = cli("classify --alpha-vec 3 5 --d 2 --vol-l2 true");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("NonRobust"), std::string::npos) << r.out;
}

TEST_F(Cli, MalformedConfig) {
  EXPECT_EQ(cli("percolate --config " + file("bad.json", "{\"version\": 1, \"law\": ")).status, 2);
  EXPECT_EQ(cli("percolate --config " + file("extra.json", config(kDiskLaw, "[1]", "[10]", 5, R"(, "colour": 1)")))
                .status,
            2);
  EXPECT_EQ(cli("percolate --config " + file("neg.json", config(kDiskLaw, "[-1]", "[10]", 5))).status, 2);
  EXPECT_EQ(cli("percolate --config " + dir_.string() + "/missing.json").status, 2);
  EXPECT_EQ(cli("percolate --bogus").status, 2);
}

TEST_F(Cli, GridRowsAndDeterminism) {
  const std::string cfg = file("grid.json", config(R"({"family": "right-triangle", "alpha": 1.5, "beta": 0.5})",
                                                   "[0.1, 0.2, 0.3]", "[10, 20]", 10));
  const auto a = cli("percolate --config " + cfg);
  const auto b = cli("percolate --config " + cfg + " --threads 2");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const auto lines = rows(a.out);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "u,L,stat,estimate,lo,hi,n,taint");
  EXPECT_EQ(split(lines[1])[0], "0.1");
  EXPECT_EQ(split(lines[2])[1], "20");
}

TEST_F(Cli, PercolateDenseDisks) {
  const auto r = cli("percolate --config " + file("c.json", config(kDiskLaw, "[2]", "[20]", 50)));
  ASSERT_EQ(r.status, 0);
  const auto lines = rows(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_GT(std::stod(split(lines[1])[3]), 0.9);
}

TEST_F(Cli, OutputDirectory) {
  const std::string cfg = file("c.json", config(kDiskLaw, "[0.5]", "[10]", 5));
  const fs::path out = dir_ / "out";
  fs::create_directories(out);
  const auto r = cli("percolate --clusters --config " + cfg + " --out " + out.string());
  ASSERT_EQ(r.status, 0);
  std::ifstream in(out / "clusters.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "replica,u,L,n_vertices,n_edges,largest_cluster,crossing,M0,N0");
  EXPECT_TRUE(fs::exists(out / "percolate.csv"));
}

TEST_F(Cli, M0Smoke) {
  const auto r = cli("m0 --config " + file("c.json", config(kDiskLaw, "[0.3]", "[2]", 500, R"(, "margin": {"explicit": 1})")));
  ASSERT_EQ(r.status, 0);
  const auto lines = rows(r.out);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(split(lines[1])[2], "M0");
  EXPECT_EQ(split(lines[2])[2], "N0");
  EXPECT_EQ(split(lines[3])[2], "M0_poisson_p");
  EXPECT_NEAR(std::stod(split(lines[1])[3]), 0.3 * 3.14159265, 0.15);
}

TEST_F(Cli, PathcountFromSnapshot) {
  BooleanSample<2> s;
  s.window = Window{2, 10.0, 0.0};
  s.intensity = 1.0;
  for (double x : {1.5, 3.0}) s.vertices.push_back({Vec<2>(x, 0), ConvexBody<2>::ball(Vec<2>(x, 0), 1.0)});
  CounterRng rng(1, 0, 0);
  add_palm_grain(s, GrainLaw{FixedBody{ConvexBody<2>::ball(Vec<2>::Zero(), 1.0)}}, rng);
  const auto r = cli("pathcount --n-max 3 --sample " + file("s.json", io::to_json(s).dump()));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "n,count\n1,1\n2,1\n3,0\n");
}

TEST_F(Cli, CoverageOfEmptyProcess) {
  const auto r = cli("coverage --config " + file("c.json", config(kDiskLaw, "[1e-9]", "[10]", 5)));
  ASSERT_EQ(r.status, 0);
  const auto lines = rows(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(split(lines[1])[2], "covered_fraction");
  EXPECT_EQ(std::stod(split(lines[1])[3]), 0.0);
}

TEST_F(Cli, MarginAndDiam) {
  const auto m = cli("margin --config " + file("c.json", config(kDiskLaw, "[1]", "[10]", 1)));
  ASSERT_EQ(m.status, 0);
  EXPECT_EQ(m.out, "u,L,margin,residual,residual_bias\n1,10,1,0,0\n");
  const auto d = cli("diam --body " + file("b.json", R"({"kind": "polytope", "vertices": [[0,0],[4,0],[4,3],[0,3]]})"));
  ASSERT_EQ(d.status, 0);
  EXPECT_NE(d.out.find("5"), std::string::npos) << d.out;
}

TEST_F(Cli, ResourceCap) {
  const auto r = cli("percolate --config " +
                     file("c.json", config(kDiskLaw, "[1]", "[1000]", 1, R"(, "max_expected_vertices": 1000)")));
  EXPECT_EQ(r.status, 3);
}

TEST_F(Cli, RegimeTableHeader) {
  const auto r = cli("regime-table --family right-triangle");
  ASSERT_EQ(r.status, 0);
  const auto lines = rows(r.out);
  EXPECT_EQ(lines[0], "family,d,params,alpha,density,robustness");
  EXPECT_EQ(lines.size(), 1u + 3u * 13u);
}
