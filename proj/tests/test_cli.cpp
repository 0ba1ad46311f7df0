#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(ZSINH_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, k);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string without_timings(const std::string& s) {
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("time") == std::string::npos) out += line + "\n";
  return out;
}

std::string sample(const char* name) { return std::string(ZSINH_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, KobolPresetPrintsCsv) {
  auto r = run("moment --preset kobol --reps 1");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("n,value,abs_err_est,rel_err_vs_oracle,nodes,method\n"), std::string::npos);
  EXPECT_NE(r.out.find("100,5.32400799771"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(",sinh1\n"), std::string::npos);
}

TEST(Cli, Sinh1WithOrderAboveOneExplainsRefusal) {
  auto r = run("moment --preset kobol --nu 1.5 --reps 1");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("Z-SINH1"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("sinh3"), std::string::npos) << r.out;
}

TEST(Cli, FilterBelowOrderIsRejected) {
  auto r = run("filter --preset filter-cubic --n-range 2:10 --reps 1");
  EXPECT_EQ(r.status, 2) << r.out;
}

TEST(Cli, BadArgumentsExitWithTwo) {
  EXPECT_EQ(run("moment --preset nope").status, 2);
  EXPECT_EQ(run("moment --method talbot").status, 2);
  EXPECT_EQ(run("moment --c abc").status, 2);
  EXPECT_EQ(run("moment --delta 0.1").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
}

TEST(Cli, RerunsAreBitIdentical) {
  auto a = run("moment --preset kobol-drift --n-range 95:105 --reps 1");
  auto b = run("moment --preset kobol-drift --n-range 95:105 --reps 1");
  ASSERT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(without_timings(a.out), without_timings(b.out));
}

TEST(Cli, DumpedConfigReproducesRun) {
  auto dump = run("moment --preset atom-mixture --dump-config");
  ASSERT_EQ(dump.status, 0);
  auto path = std::filesystem::temp_directory_path() / "zsinh_cli_dump.json";
  {
    FILE* f = std::fopen(path.c_str(), "w");
    ASSERT_NE(f, nullptr);
    std::fputs(dump.out.c_str(), f);
    std::fclose(f);
  }
  auto a = run("moment --preset atom-mixture --reps 1");
  auto b = run("moment --config " + path.string() + " --reps 1");
  std::filesystem::remove(path);
  ASSERT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(without_timings(a.out), without_timings(b.out));
}

TEST(Cli, SampleConfigsRun) {
  auto m = run("moment --config " + sample("kobol_moment.json") + " --reps 1");
  EXPECT_EQ(m.status, 0) << m.out;
  auto n = run("moment --config " + sample("nts_drift_range.json") + " --reps 1");
  EXPECT_EQ(n.status, 0) << n.out;
  auto f = run("filter --config " + sample("filter_cubic.json") + " --reps 1");
  EXPECT_EQ(f.status, 0) << f.out;
  EXPECT_NE(f.out.find("outer_nodes=345 inner_nodes=475"), std::string::npos) << f.out;
  auto b = run("bench --config " + sample("bench_mixture.json") + " --reps 1");
  EXPECT_EQ(b.status, 0) << b.out;
  EXPECT_NE(b.out.find("trap,1101,"), std::string::npos) << b.out;
}

TEST(Cli, PresetListing) {
  auto r = run("presets");
  EXPECT_EQ(r.status, 0);
  for (const char* p : {"kobol", "kobol-drift", "atom-mixture", "kobol-nu15", "nts-drift", "filter-cubic", "bench-nts"})
    EXPECT_NE(r.out.find(std::string(p) + "\t"), std::string::npos) << p;
}
