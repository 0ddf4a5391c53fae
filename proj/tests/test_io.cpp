#include "fixtures.hpp"

#include "ivmech/error.hpp"
#include "ivmech/gen.hpp"
#include "ivmech/io.hpp"
#include "ivmech/solve.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sys/wait.h>

using namespace ivmech;
using fixtures::q;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NotFound;
}

struct Run {
  int status;
  std::string out;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(IVMECH_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) out.append(buf, got);
  int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ivmech_test_io_" + name)).string();
}

}  // namespace

TEST(Io, InstanceRoundTrip) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    int n = 2 + t % 2, k = 2 + t % 3;
    auto inst = fixtures::random_instance(rng, n, k, t % 2 ? Mode::Chore : Mode::Good);
    auto back = parse_instance(instance_to_json(inst).dump()).instance;
    EXPECT_EQ(back.mode(), inst.mode());
    EXPECT_EQ(back.table(), inst.table());
  }
}

TEST(Io, RatiosFileReproducesRatios) {
  auto rho = fixtures::pair_ratios();
  auto file = parse_instance(ratios_to_json(rho).dump());
  EXPECT_TRUE(file.from_ratios);
  EXPECT_EQ(ratios_from_values(file.instance).table(), rho.table());
}

TEST(Io, AllocationRoundTrip) {
  std::mt19937_64 rng(5);
  auto x = fixtures::random_allocation(rng, 3, 2);
  EXPECT_EQ(parse_allocation(allocation_to_json(x).dump()).table(), x.table());
}

TEST(Io, Malformed) {
  EXPECT_EQ(code_of("{"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"n":2,"k":2,"mode":"good"})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"n":2,"k":2,"mode":"odd","entries":[[1,1,1,1],[1,1,1,1]]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"n":2,"k":2,"mode":"good","entries":[[1,1,1],[1,1,1,1]]})"), ErrorCode::ParseError);
  EXPECT_EQ(code_of(R"({"n":2,"k":2,"mode":"good","entries":[["1/0",1,1,1],[1,1,1,1]]})"), ErrorCode::ParseError);
}

TEST(Io, ReportOmitsTimingByDefault) {
  auto rho = fixtures::pair_ratios();
  auto ord = orderings_from_instance(fixtures::pair_instance());
  auto r = solve(rho, ord, Target::Cost);
  auto plain = report_to_json(r);
  EXPECT_FALSE(plain.contains("wall_ms"));
  EXPECT_EQ(plain["ratio"], "8/5");
  EXPECT_TRUE(report_to_json(r, true, true).contains("wall_ms"));
}

TEST(Solve, AutoDispatch) {
  std::mt19937_64 rng(3);
  auto two = fixtures::random_instance(rng, 2, 3, Mode::Good);
  EXPECT_EQ(solve(ratios_from_values(two), orderings_from_instance(two), Target::Det).path, SolvePath::Duo);
  auto binary = fixtures::random_instance(rng, 3, 2, Mode::Good);
  EXPECT_EQ(solve(ratios_from_values(binary), orderings_from_instance(binary), Target::Det).path, SolvePath::Binary);
  auto wide = fixtures::random_instance(rng, 3, 3, Mode::Good);
  auto rho = ratios_from_values(wide);
  auto ord = orderings_from_instance(wide);
  EXPECT_EQ(solve(rho, ord, Target::Value).path, SolvePath::Lp);
  EXPECT_EQ(solve(rho, ord, Target::Det).path, SolvePath::Propagation);
  auto small = ratios_from_values(two);
  auto small_ord = orderings_from_instance(two);
  EXPECT_EQ(solve(small, small_ord, Target::Det, FastPath::Oracle).ratio, solve(small, small_ord, Target::Det).ratio);
}

TEST(Solve, SizeGuard) {
  auto rho = fixtures::ones(4, 33);
  ASSERT_GT(rho.space().size(), kDetProfileGuard);
  try {
    solve(rho, orderings_from_instance(values_from_ratios(rho, Mode::Good)), Target::Det);
    FAIL() << "expected TooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(Solve, CrossCheckAgrees) {
  std::mt19937_64 rng(21);
  for (auto [n, k] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3}}) {
    auto inst = fixtures::random_instance(rng, n, k, Mode::Good);
    auto cc = cross_check(ratios_from_values(inst), orderings_from_instance(inst));
    EXPECT_TRUE(cc.agree) << n << "x" << k;
    EXPECT_GE(cc.rows.size(), 3u);
  }
}

TEST(Cli, PairCostAndExitCodes) {
  auto f5 = temp_path("pair.json");
  ASSERT_EQ(cli("gen fig5 --out " + f5).status, 0);
  auto cost = cli("solve " + f5 + " --objective cost");
  ASSERT_EQ(cost.status, 0);
  EXPECT_EQ(Json::parse(cost.out)["ratio"], "8/5");
  EXPECT_EQ(cli("crosscheck " + f5).status, 0);

  auto bad = temp_path("bad.json");
  write_file(bad, "{");
  EXPECT_EQ(cli("solve " + bad).status, 2);
  EXPECT_EQ(cli("solve").status, 2);

  auto wide = temp_path("wide.json");
  ASSERT_EQ(cli("gen random --n 3 --k 4 --out " + wide).status, 0);
  EXPECT_EQ(cli("solve " + wide + " --objective det --budget 1").status, 3);

  auto lottery = temp_path("lottery.json");
  write_file(lottery, R"({"n":2,"k":2,"x":[["1","0","1","0"],["0","1","0","1"]]})");
  EXPECT_EQ(cli("payments " + f5 + " " + lottery).status, 5);
}

TEST(Cli, RandomIsByteIdentical) {
  auto a = cli("gen random --n 3 --k 3 --seed 9 --mode chore");
  auto b = cli("gen random --n 3 --k 3 --seed 9 --mode chore");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, cli("gen random --n 3 --k 3 --seed 10 --mode chore").out);
}
