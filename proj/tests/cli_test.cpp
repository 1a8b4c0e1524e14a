#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "codeaug/data/dataset.hpp"

namespace fs = std::filesystem;

namespace {

struct Tmp {
  fs::path dir;
  Tmp() {
    dir = fs::temp_directory_path() / ("codeaug_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Tmp() { fs::remove_all(dir); }
  std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

int sh(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(CODEAUG_CLI) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST(Cli, VersionAndUsage) {
  EXPECT_EQ(sh("--version"), 0);
  EXPECT_EQ(sh("no-such-command"), 1);
  EXPECT_EQ(sh("gen-corpus"), 1);  // --out is required
}

TEST(Cli, GenCorpusIsDeterministic) {
  Tmp t;
  ASSERT_EQ(sh("gen-corpus --classes 3 --per-class 2 --out " + (t / "a.jsonl")), 0);
  ASSERT_EQ(sh("gen-corpus --classes 3 --per-class 2 --out " + (t / "b.jsonl")), 0);
  EXPECT_EQ(slurp(t / "a.jsonl"), slurp(t / "b.jsonl"));
  EXPECT_EQ(codeaug::read_dataset(t / "a.jsonl", codeaug::Task::Classify).samples.size(), 6u);
}

TEST(Cli, SeedPrecedence) {
  Tmp t;
  ASSERT_EQ(sh("gen-corpus --classes 2 --per-class 2 --out " + (t / "d.jsonl")), 0);
  ASSERT_EQ(sh("gen-corpus --classes 2 --per-class 2 --out " + (t / "e.jsonl"), "CODEAUG_SEED=99"), 0);
  ASSERT_EQ(sh("gen-corpus --classes 2 --per-class 2 --seed 99 --out " + (t / "f.jsonl")), 0);
  ASSERT_EQ(sh("gen-corpus --classes 2 --per-class 2 --seed 17 --out " + (t / "g.jsonl"), "CODEAUG_SEED=99"), 0);
  EXPECT_NE(slurp(t / "d.jsonl"), slurp(t / "e.jsonl"));
  EXPECT_EQ(slurp(t / "e.jsonl"), slurp(t / "f.jsonl"));
  EXPECT_EQ(slurp(t / "g.jsonl"), slurp(t / "d.jsonl")) << "flag beats environment";
}

TEST(Cli, ConfigFileSections) {
  Tmp t;
  spit(t / "c.toml", "[gen-corpus]\nclasses = 3\nper-class = 1\n");
  ASSERT_EQ(sh("--config " + (t / "c.toml") + " gen-corpus --out " + (t / "c.jsonl")), 0);
  EXPECT_EQ(codeaug::read_dataset(t / "c.jsonl", codeaug::Task::Classify).samples.size(), 3u);
  // Command line overrides the file.
  ASSERT_EQ(sh("--config " + (t / "c.toml") + " gen-corpus --per-class 2 --out " + (t / "d.jsonl")), 0);
  EXPECT_EQ(codeaug::read_dataset(t / "d.jsonl", codeaug::Task::Classify).samples.size(), 6u);
}

TEST(Cli, ExitCodes) {
  Tmp t;
  spit(t / "bad.jsonl", "{not json}\n");
  spit(t / "ok.c", "int main(){printf(\"%d\", 1+2); return 0;}\n");
  spit(t / "syntax.c", "int main(){return 1 +;}\n");
  spit(t / "oob.c", "int main(){int a[2]; a[3] = 1; return 0;}\n");
  EXPECT_EQ(sh("augment " + (t / "bad.jsonl") + " " + (t / "o.jsonl")), 2);
  EXPECT_EQ(sh("augment " + (t / "missing.jsonl") + " " + (t / "o.jsonl")), 1);
  EXPECT_EQ(sh("run " + (t / "ok.c") + " --out " + (t / "ok.out")), 0);
  EXPECT_EQ(slurp(t / "ok.out"), "3");
  EXPECT_EQ(sh("run " + (t / "syntax.c")), 2);
  EXPECT_EQ(sh("run " + (t / "oob.c")), 2);
  EXPECT_EQ(sh("transform " + (t / "ok.c") + " " + (t / "x.c") + " --kinds bogus"), 2);
}

TEST(Cli, SyntaxDiagnosticHasFileLineCol) {
  Tmp t;
  spit(t / "syntax.c", "int main(){\nreturn 1 +;}\n");
  std::string cmd = std::string(CODEAUG_CLI) + " run " + (t / "syntax.c") + " 2>" + (t / "err.txt");
  (void)std::system(cmd.c_str());
  EXPECT_NE(slurp(t / "err.txt").find(t / "syntax.c:2:"), std::string::npos) << slurp(t / "err.txt");
}

TEST(Cli, OutputMayNotOverwriteInput) {
  Tmp t;
  ASSERT_EQ(sh("gen-corpus --classes 2 --per-class 2 --out " + (t / "d.jsonl")), 0);
  std::string before = slurp(t / "d.jsonl");
  EXPECT_EQ(sh("augment " + (t / "d.jsonl") + " " + (t / "d.jsonl")), 1);
  EXPECT_EQ(sh("augment " + (t / "d.jsonl") + " " + t.dir.string() + "/./d.jsonl"), 1);
  EXPECT_EQ(slurp(t / "d.jsonl"), before);
}

TEST(Cli, TrainEvalRoundTrip) {
  Tmp t;
  ASSERT_EQ(sh("gen-corpus --classes 3 --per-class 4 --out " + (t / "d.jsonl")), 0);
  ASSERT_EQ(sh("augment " + (t / "d.jsonl") + " " + (t / "a.jsonl") + " --m 2"), 0);
  ASSERT_EQ(sh("train " + (t / "a.jsonl") + " --model " + (t / "m.bin") + " --pacing root_10 --schedule-out " +
               (t / "s.json")),
            0);
  ASSERT_EQ(sh("eval " + (t / "m.bin") + " " + (t / "d.jsonl") + " --metric accuracy --tta --out " + (t / "r.csv")),
            0);
  std::string report = slurp(t / "r.csv");
  EXPECT_EQ(report.rfind("# version: codeaug ", 0), 0u) << report;
  EXPECT_NE(report.find("dataset,metric,value,seed,tta\n"), std::string::npos) << report;
  EXPECT_NE(slurp(t / "s.json").find("\"pacing\": \"root_10\""), std::string::npos);
  // A truncated model is a data error.
  spit(t / "m2.bin", slurp(t / "m.bin").substr(0, 10));
  EXPECT_EQ(sh("eval " + (t / "m2.bin") + " " + (t / "d.jsonl") + " --out " + (t / "r2.csv")), 2);
}
