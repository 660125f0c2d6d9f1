#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "networks.hpp"
#include "pgm/io/bif.hpp"
#include "pgm/io/network_json.hpp"

namespace pgm {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(PGM_TEST_TMP) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static CliRun run(std::vector<std::string> args, const std::string& workers = "2") {
    args.insert(args.begin(), {"--workers", workers});
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST_F(Cli, LearnStructureOnChainData) {
  const std::string model = write("chain.bif", write_bif(testing::chain3()));
  ASSERT_EQ(run({"generate", "--model", model, "--n", "10000", "--seed", "0", "--out", path("d.csv")}).code, 0);
  const CliRun r = run({"learn-structure", "--data", path("d.csv"), "--out", path("learned")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("edges"), 2);
  const Json cpdag = Json::parse(read(path("learned.cpdag.json")));
  EXPECT_EQ(cpdag.at("edges").size(), 2u);
  EXPECT_TRUE(fs::exists(path("learned.dag.bif-structure.json")));

  const CliRun s = run({"eval", "shd", "--learned", path("learned.cpdag.json"), "--truth", model});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(Json::parse(s.out).at("shd"), 0);
}

TEST_F(Cli, LearnStructureUsageErrors) {
  const CliRun missing = run({"learn-structure", "--out", path("x")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("--data"), std::string::npos);
  EXPECT_NE(missing.err.find("Usage"), std::string::npos);

  const std::string csv = write("d.csv", "a,b\n0,1\n1,0\n");
  const CliRun alpha = run({"learn-structure", "--data", csv, "--alpha", "1.5", "--out", path("x")});
  EXPECT_EQ(alpha.code, 2);
  EXPECT_NE(alpha.err.find("alpha must be in (0,1)"), std::string::npos);
}

TEST_F(Cli, LearnParamsRecoversGenerator) {
  const Network truth = testing::ab_network();
  const std::string model = write("ab.bif", write_bif(truth));
  ASSERT_EQ(run({"generate", "--model", model, "--n", "1000000", "--seed", "0", "--out", path("d.csv")}).code, 0);
  const CliRun r = run({"learn-params", "--data", path("d.csv"), "--structure", model, "--out", path("fit.bif")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Network fit = parse_bif(read(path("fit.bif")));
  EXPECT_TRUE(networks_equal(fit, truth, 0.01));
}

TEST_F(Cli, LearnParamsErrors) {
  const std::string model = write("ab.bif", write_bif(testing::ab_network()));
  const std::string csv = write("d.csv", "A,B\ntrue,false\nfalse,true\n");
  EXPECT_EQ(run({"learn-params", "--data", csv, "--structure", model, "--pseudocount", "-1", "--out", path("o")}).code,
            2);
  const std::string other = write("o.csv", "A,Z\ntrue,false\nfalse,true\n");
  const CliRun r = run({"learn-params", "--data", other, "--structure", model, "--out", path("o")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Z"), std::string::npos) << r.err;
}

TEST_F(Cli, InferExactEnginesAgree) {
  const std::string model = write("ab.bif", write_bif(testing::ab_network()));
  const CliRun ve = run({"infer", "--model", model, "--engine", "ve", "--evidence", "B=true", "--query", "A"});
  const CliRun jt = run({"infer", "--model", model, "--engine", "jt", "--evidence", "B=true", "--query", "A"});
  ASSERT_EQ(ve.code, 0) << ve.err;
  ASSERT_EQ(jt.code, 0) << jt.err;
  const Json a = Json::parse(ve.out), b = Json::parse(jt.out);
  EXPECT_NEAR(a["marginals"]["A"]["true"].get<double>(), 0.6585, 1e-4);
  EXPECT_NEAR(a["marginals"]["A"]["false"].get<double>(), 0.3415, 1e-4);
  EXPECT_EQ(a["marginals"].dump(), b["marginals"].dump());
}

TEST_F(Cli, InferErrors) {
  const std::string model = write("ab.bif", write_bif(testing::ab_network()));
  const CliRun bad = run({"infer", "--model", model, "--evidence", "B=maybe"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("false"), std::string::npos);
  EXPECT_NE(bad.err.find("true"), std::string::npos);

  const Network det = Network::from_rows("det", {{0, "A", {"f", "t"}}, {1, "B", {"f", "t"}}}, {{}, {0}},
                                         {{1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}});
  const std::string dm = write("det.bif", write_bif(det));
  const CliRun imp = run({"infer", "--model", dm, "--engine", "jt", "--evidence", "B=t"});
  EXPECT_EQ(imp.code, 1);
  EXPECT_NE(imp.err.find("impossible evidence"), std::string::npos) << imp.err;

  EXPECT_EQ(run({"infer", "--model", model, "--engine", "gibbs"}).code, 2);
  EXPECT_EQ(run({"infer", "--model", path("missing.bif")}).code, 1);
}

TEST_F(Cli, InferSamplerDiagnostics) {
  const std::string model = write("b8.bif", write_bif(testing::benchmark8()));
  const CliRun r = run({"infer", "--model", model, "--engine", "epis", "--evidence", "D=false", "--n", "5000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json d = Json::parse(r.out).at("diagnostics");
  EXPECT_EQ(d.at("samples"), 5000);
  EXPECT_TRUE(d.contains("converged"));
  EXPECT_TRUE(d.contains("effective_sample_size"));
}

TEST_F(Cli, GenerateIsDeterministic) {
  const std::string model = write("b8.bif", write_bif(testing::benchmark8()));
  ASSERT_EQ(run({"generate", "--model", model, "--n", "2000", "--seed", "5", "--out", path("a.csv")}).code, 0);
  ASSERT_EQ(run({"generate", "--model", model, "--n", "2000", "--seed", "5", "--out", path("b.csv")}, "1").code, 0);
  EXPECT_EQ(read(path("a.csv")), read(path("b.csv")));
}

TEST_F(Cli, EvalShdIdenticalFiles) {
  const std::string model = write("b8.bif", write_bif(testing::benchmark8()));
  const CliRun r = run({"eval", "shd", "--learned", model, "--truth", model});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).dump(), R"({"shd":0})");
}

TEST_F(Cli, EvalHellingerBetweenEngines) {
  const std::string model = write("ab.bif", write_bif(testing::ab_network()));
  write("ve.json", run({"infer", "--model", model, "--engine", "ve"}).out);
  write("pls.json", run({"infer", "--model", model, "--engine", "pls", "--n", "100000"}).out);
  const CliRun r = run({"eval", "hellinger", "--a", path("ve.json"), "--b", path("pls.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const double h = Json::parse(r.out).at("mean_hellinger");
  EXPECT_GE(h, 0.0);
  EXPECT_LT(h, 0.01);
  const CliRun self = run({"eval", "hellinger", "--a", path("ve.json"), "--b", path("ve.json")});
  EXPECT_EQ(Json::parse(self.out).at("mean_hellinger"), 0.0);
}

TEST_F(Cli, ConvertFormats) {
  const std::string model = write("ab.bif", write_bif(testing::ab_network()));
  const CliRun dot = run({"convert", "--in", model, "--to", "dot"});
  ASSERT_EQ(dot.code, 0);
  EXPECT_NE(dot.out.find("A -> B"), std::string::npos);
  ASSERT_EQ(run({"convert", "--in", model, "--to", "json", "--out", path("ab.json")}).code, 0);
  EXPECT_TRUE(networks_equal(parse_network_json(read(path("ab.json"))), testing::ab_network(), 1e-12));
  EXPECT_EQ(run({"convert", "--in", model, "--to", "xml"}).code, 2);
}

TEST_F(Cli, ClassifyJtMatchesVe) {
  const std::string model = write("b8.bif", write_bif(testing::benchmark8()));
  ASSERT_EQ(run({"generate", "--model", model, "--n", "500", "--seed", "1", "--out", path("d.csv")}).code, 0);
  const CliRun ve = run({"classify", "--model", model, "--data", path("d.csv"), "--class-var", "G", "--engine", "ve"});
  const CliRun jt = run({"classify", "--model", model, "--data", path("d.csv"), "--class-var", "G", "--engine", "jt"});
  ASSERT_EQ(ve.code, 0) << ve.err;
  ASSERT_EQ(jt.code, 0) << jt.err;
  EXPECT_EQ(Json::parse(ve.out).at("accuracy"), Json::parse(jt.out).at("accuracy"));
  EXPECT_GE(Json::parse(jt.out).at("accuracy").get<double>(), Json::parse(jt.out).at("majority_baseline").get<double>());
}

TEST_F(Cli, HelpAndUnknownCommand) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

}  // namespace
}  // namespace pgm
