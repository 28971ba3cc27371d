#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = TREESEQ_CLI;
const std::string kData = TREESEQ_TEST_DATA;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("treeseq_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the CLI with `args`; stdout and stderr both go to `log`.
  int run(const std::string& args, const std::string& log = "log.txt") {
    const std::string cmd = "cd '" + dir_.string() + "' && '" + kCli + "' " + args +
                            " > '" + (dir_ / log).string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out(const std::string& name = "log.txt") { return slurp(dir_ / name); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EncodeMatchesGoldenLabels) {
  ASSERT_EQ(run("encode " + kData + "/fixture.trees -o fixture.labels"), 0) << out();
  EXPECT_EQ(out("fixture.labels"), slurp(kData + "/fixture.labels"));
  EXPECT_EQ(out("fixture.labels.psi"), slurp(kData + "/fixture.psi"));
}

TEST_F(Cli, EncodeToStdoutWithThreads) {
  ASSERT_EQ(run("encode --threads 3 - < " + kData + "/fixture.trees", "stdout.txt"), 0);
  EXPECT_EQ(out("stdout.txt"), slurp(kData + "/fixture.labels"));
}

TEST_F(Cli, EncodeEmptyInput) {
  std::ofstream(dir_ / "empty.trees").close();
  ASSERT_EQ(run("encode empty.trees -o empty.labels"), 0) << out();
  EXPECT_EQ(out("empty.labels"), "");
}

TEST_F(Cli, KaryNeedsBinaryTrees) {
  EXPECT_EQ(run("encode --scale kary " + kData + "/fixture.trees -o k.labels"), 1);
  EXPECT_NE(out().find("NotStrictlyKary"), std::string::npos) << out();
  EXPECT_NE(out().find("line 1"), std::string::npos) << out();
  EXPECT_EQ(run("roundtrip --scale kary --binarize " + kData + "/fixture.trees"), 0) << out();
}

TEST_F(Cli, DecodeGoldenLabels) {
  ASSERT_EQ(run("decode " + kData + "/fixture.labels -o back.trees"), 0) << out();
  EXPECT_EQ(out("back.trees"), slurp(kData + "/fixture.trees"));
}

TEST_F(Cli, DecodeEmptyInput) {
  std::ofstream(dir_ / "empty.labels").close();
  ASSERT_EQ(run("decode empty.labels -o empty.trees"), 0) << out();
  EXPECT_EQ(out("empty.trees"), "");
}

TEST_F(Cli, DecodeArbitraryLabels) {
  std::ofstream(dir_ / "fuzz.labels")
      << "a\tA\t+5|X\nb\tB\t-9|Y\nc\tC\tNEG|Z\nd\tD\t+1|S\ne\tE\tEOS|EOS\n\n";
  ASSERT_EQ(run("decode fuzz.labels -o fuzz.trees"), 0) << out();
  EXPECT_EQ(out("fuzz.trees"), "(Y (X (A a) (B b)) (C c) (S (D d) (E e)))\n");
}

TEST_F(Cli, Roundtrip) {
  ASSERT_EQ(run("roundtrip " + kData + "/fixture.trees"), 0) << out();
  EXPECT_EQ(out(), "OK 3 trees\n");
  for (const char* flags : {"--scale abs", "--scale rel", "--unaries extended"})
    EXPECT_EQ(run(std::string("roundtrip ") + flags + " " + kData + "/fixture.trees"), 0)
        << flags << ": " << out();
  EXPECT_EQ(run("roundtrip --labels " + kData + "/fixture.labels " + kData + "/fixture.trees"),
            0)
      << out();
}

TEST_F(Cli, RoundtripReportsCorruptedLabelLine) {
  std::string labels = slurp(kData + "/fixture.labels");
  auto at = labels.find("+1|VP");  // file line 7
  ASSERT_NE(at, std::string::npos);
  labels.replace(at, 5, "+1||VP");
  std::ofstream(dir_ / "bad.labels") << labels;
  EXPECT_EQ(run("roundtrip --labels bad.labels " + kData + "/fixture.trees"), 1);
  EXPECT_NE(out().find("line 7"), std::string::npos) << out();

  // A well-formed but wrong label is reported at the tree's line.
  labels = slurp(kData + "/fixture.labels");
  labels.replace(labels.find("+1|NP"), 5, "+1|QP");
  std::ofstream(dir_ / "wrong.labels") << labels;
  EXPECT_EQ(run("roundtrip --labels wrong.labels " + kData + "/fixture.trees"), 1);
  EXPECT_NE(out().find("FAIL line 2"), std::string::npos) << out();
}

TEST_F(Cli, EvalGoldAgainstGold) {
  const std::string f = kData + "/fixture.trees";
  ASSERT_EQ(run("eval --machine " + f + " " + f), 0) << out();
  EXPECT_NE(out().find("F1=1.0000"), std::string::npos) << out();
  EXPECT_NE(out().find("ACC=1.0000"), std::string::npos) << out();
}

TEST_F(Cli, Errors) {
  EXPECT_EQ(run("parse --model missing.model " + kData + "/features.tsv"), 1);
  EXPECT_NE(out().find("UnreadableFile"), std::string::npos) << out();
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("train"), 2);
  EXPECT_EQ(run("encode --scale sideways " + kData + "/fixture.trees"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("--help"), 0);
  std::ofstream(dir_ / "broken.trees") << "(S (A a)\n";
  EXPECT_EQ(run("encode broken.trees -o x.labels"), 1);
  EXPECT_NE(out().find("UnbalancedBrackets"), std::string::npos) << out();
}

TEST_F(Cli, TrainParseEvalIsDeterministic) {
  ASSERT_EQ(run("toy-corpus --seed 5 --train 150 --test 30 --out-dir toy"), 0) << out();
  ASSERT_EQ(run("encode toy/train.trees -o train.labels"), 0) << out();
  ASSERT_EQ(run("encode toy/test.trees -o test.labels"), 0) << out();

  auto pipeline = [&](const std::string& tag, int threads) {
    ASSERT_EQ(run("train train.labels.psi --pass psi --epochs 3 --model psi" + tag), 0) << out();
    ASSERT_EQ(run("train train.labels --pass phi --epochs 3 --model phi" + tag), 0) << out();
    ASSERT_EQ(run("parse --model phi" + tag + " --psi-model psi" + tag + " --threads " +
                  std::to_string(threads) + " test.labels.psi -o pred" + tag),
              0)
        << out();
    ASSERT_EQ(run("eval --machine toy/test.trees pred" + tag, "eval" + tag), 0) << out();
  };
  pipeline("1", 1);
  pipeline("2", 3);
  for (const char* f : {"psi", "phi", "pred", "eval"})
    EXPECT_EQ(out(std::string(f) + "1"), out(std::string(f) + "2")) << f;
  EXPECT_EQ(out("phi1").rfind("version=1\n", 0), 0u);
  EXPECT_NE(out("eval1").find("F1="), std::string::npos);

  // Predict writes labels for tagged input.
  ASSERT_EQ(run("predict --model phi1 --psi-model psi1 test.labels.psi -o pred.labels"), 0)
      << out();
  ASSERT_EQ(run("decode pred.labels -o pred.trees"), 0) << out();
  EXPECT_EQ(out("pred.trees"), out("pred1"));

  // A psi model is not a parser.
  EXPECT_EQ(run("parse --model psi1 test.labels.psi"), 1);
}
