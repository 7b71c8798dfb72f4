#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "hchaos/io.hpp"
#include "hchaos/scenarios.hpp"

namespace fs = std::filesystem;
using namespace hchaos;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(HCHAOS_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
  const int rc = pclose(p);
  o.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return o;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("hchaos_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    io::write_file(p.string(), text);
    return p.string();
  }
  std::size_t count(const fs::path& dir) const {
    if (!fs::exists(dir)) return 0;
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
  }

 private:
  fs::path path_;
};

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
  const auto s = io::parse_config("# top\n[scenario]\nname = airy  # trailing\ngamma=1.05\n\n[scenario]\nname=x\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].get("name", ""), "airy");
  EXPECT_DOUBLE_EQ(s[0].number("gamma", 0.0), 1.05);
  EXPECT_EQ(s[0].entries.at("gamma").line, 4);
  EXPECT_EQ(s[1].line, 6);
}

TEST(Config, Errors) {
  EXPECT_THROW(io::parse_config("name = x\n"), Error);
  EXPECT_THROW(io::parse_config("[a\n"), Error);
  EXPECT_THROW(io::parse_config("[a]\nnovalue\n"), Error);
  EXPECT_THROW(io::parse_config("[a]\nk=1\nk=2\n"), Error);
  const auto s = io::parse_config("[a]\nk = abc\nz = 1\n");
  EXPECT_THROW(s[0].number("k", 0.0), Error);
  try {
    s[0].require_known({"k"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Csv, SeventeenDigitsAndLf) {
  io::CsvWriter w({"a", "b"});
  w.row(std::vector<double>{0.1, 1.0 / 3.0});
  EXPECT_EQ(w.str(), "a,b\n0.10000000000000001,0.33333333333333331\n");
  EXPECT_THROW(w.row(std::vector<double>{1.0}), Error);
}

TEST(Catalog, NamesAnchorsAndCriteria) {
  for (const char* n : {"fig2-sos", "fig4-census", "fig9-partitions", "sec3-areas", "fig10-cycle",
                        "fig11-sr", "fig13-bifurcation", "airy", "fig15-phase"}) {
    EXPECT_NE(scenarios::find(n), nullptr) << n;
  }
  std::array<int, 15> seen{};
  for (const auto& s : scenarios::catalog()) {
    EXPECT_FALSE(s.anchor.empty()) << s.name;
    EXPECT_FALSE(s.expected.empty()) << s.name;
    ++seen.at(static_cast<std::size_t>(s.criterion));
  }
  for (int c = 1; c <= 14; ++c) EXPECT_EQ(seen[c], 1) << "criterion " << c;
}

TEST(Cli, ListIsStable) {
  const Outcome a = cli("list"), b = cli("list");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, scenarios::catalog_text());
}

TEST(Cli, EmptyScenarioFile) {
  TempDir d("empty");
  const std::string f = d.file("empty.ini", "# nothing to run\n");
  const fs::path out = d.path() / "out";
  const Outcome o = cli("run " + f + " --out-dir " + out.string());
  EXPECT_EQ(o.status, 0) << o.out;
  EXPECT_EQ(d.count(out), 0u);
}

TEST(Cli, UnknownKeyNamesItsLine) {
  TempDir d("badkey");
  const std::string f = d.file("bad.ini", "[scenario]\nname = airy\ncolour = red\n");
  const Outcome o = cli("run " + f + " --out-dir " + (d.path() / "out").string());
  EXPECT_NE(o.status, 0);
  EXPECT_NE(o.out.find("line 3"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("colour"), std::string::npos) << o.out;
}

TEST(Cli, UnknownScenarioRejected) {
  TempDir d("badname");
  const std::string f = d.file("bad.ini", "[scenario]\nname = nope\n");
  const Outcome o = cli("run " + f);
  EXPECT_NE(o.status, 0);
  EXPECT_NE(o.out.find("line 2"), std::string::npos) << o.out;
}

TEST(Cli, RunWritesDeterministicArtifacts) {
  TempDir d("determinism");
  const std::string f = d.file("run.ini", "[scenario]\nname = fig2-sos\niterations = 300\nassert = true\n");
  const fs::path o1 = d.path() / "one", o2 = d.path() / "two";
  const Outcome a = cli("run " + f + " --out-dir " + o1.string());
  const Outcome b = cli("run " + f + " --out-dir " + o2.string());
  ASSERT_EQ(a.status, 0) << a.out;
  ASSERT_EQ(b.status, 0) << b.out;
  const std::string c1 = io::read_file((o1 / "fig2_sos.csv").string());
  EXPECT_EQ(c1, io::read_file((o2 / "fig2_sos.csv").string()));
  EXPECT_EQ(c1.rfind("bounce,q,p\n", 0), 0u);
  EXPECT_EQ(c1.find('\r'), std::string::npos);
  EXPECT_TRUE(fs::exists(o1 / "fig2_sos.svg"));
}

TEST(Cli, SeededEnsembleIsReproducible) {
  TempDir d("seed");
  const fs::path o1 = d.path() / "one", o2 = d.path() / "two";
  const std::string args = "sos --kparam 1.1 --iterations 200 --seed 9 --out-dir ";
  ASSERT_EQ(cli(args + o1.string()).status, 0);
  ASSERT_EQ(cli(args + o2.string()).status, 0);
  EXPECT_EQ(io::read_file((o1 / "fig1_K1.1.csv").string()), io::read_file((o2 / "fig1_K1.1.csv").string()));
}

TEST(Cli, FailedAssertionRemovesArtifacts) {
  TempDir d("assert");
  const fs::path out = d.path() / "out";
  const Outcome o = cli("run --scenario sec2-monodromy --gamma 1.05 --assert --out-dir " + out.string());
  EXPECT_NE(o.status, 0);
  EXPECT_NE(o.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(d.count(out), 0u);
}

TEST(Cli, TurnstileAssertPasses) {
  TempDir d("turnstile");
  const Outcome o = cli("run --scenario turnstile --assert --out-dir " + (d.path() / "out").string());
  EXPECT_EQ(o.status, 0) << o.out;
  EXPECT_NE(o.out.find("A_t"), std::string::npos);
}

TEST(Cli, Subcommands) {
  TempDir d("sub");
  const std::string out = " --out-dir " + d.path().string();
  EXPECT_EQ(cli("orbits --n 3" + out).status, 0);
  EXPECT_TRUE(fs::exists(d.path() / "orbits.csv"));
  EXPECT_EQ(cli("manifold --budget 2" + out).status, 0);
  EXPECT_EQ(cli("complex --assert" + out).status, 0);
  EXPECT_EQ(cli("partition --n 1" + out).status, 0);
  EXPECT_NE(cli("bogus").status, 0);
}
