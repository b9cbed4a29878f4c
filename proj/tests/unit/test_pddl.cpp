#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hypforge/parser.hpp"
#include "hypforge/pddl.hpp"
#include "hypforge/random_model.hpp"
#include "support.hpp"

using namespace hypforge;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::size_t line_of(const std::string& text, std::size_t offset) {
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

TEST(Pddl, EmptyTraceHasNoDiscardActions) {
  const PddlFiles f = export_pddl(compile(hftest::bundled("malware"), Trace{}, CostParams{}));
  EXPECT_EQ(occurrences(f.domain, "(:action discard"), 0u);
  EXPECT_NE(f.domain.find(":action-costs"), std::string::npos);
  EXPECT_NE(f.problem.find("(:metric minimize (total-cost))"), std::string::npos);
}

TEST(Pddl, MalwareTwoObservationProblemMatchesGolden) {
  const PlanningProblem p = compile(hftest::bundled("malware"),
                                    Trace::from_symbols({"blacklisted-download", "ad-traffic-increase"}), CostParams{});
  const PddlFiles f = export_pddl(p, "crawl");
  EXPECT_EQ(f.problem, read_text_file(std::string(HFTEST_GOLDEN_DIR) + "/malware-crawl-problem.pddl"));
  EXPECT_LT(f.problem.find("o0-blacklisted-download"), f.problem.find("o1-ad-traffic-increase"));
  EXPECT_EQ(occurrences(f.domain, "(:action discard"), 2u);
  EXPECT_NE(f.domain.find("(define (domain malware)"), std::string::npos);
}

TEST(Pddl, SingletonRoundTrip) {
  const auto m = hftest::must_parse("default <good>\nS {obs1}\nstart: S\n");
  const PlanningProblem p = compile(m, Trace::from_symbols({"obs1"}), CostParams{});
  const PddlFiles f = export_pddl(p);
  const PlanningProblem back = read_pddl(f.domain, f.problem);
  EXPECT_TRUE(structurally_equal(p, back));
  EXPECT_EQ(back.model, nullptr);
}

TEST(Pddl, RoundTripRandomInstances) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto m = generate_random_model(2 + seed % 11, 0.6, seed);
    const Trace t = hftest::random_trace(m, seed % 7, rng);
    const CostParams params = CostParams::make(50 + static_cast<Cost>(seed), 1 + static_cast<Cost>(seed % 3), 20, 3);
    const PlanningProblem p = compile(m, t, params, {seed % 5 == 0 ? std::optional<std::size_t>(2) : std::nullopt});
    const PddlFiles f = export_pddl(p, "t" + std::to_string(seed));
    const PlanningProblem back = read_pddl(f.domain, f.problem);
    EXPECT_TRUE(structurally_equal(p, back)) << "seed " << seed;
  }
}

TEST(Pddl, RoundTripBundledModels) {
  for (const auto& [name, syms] : std::vector<std::pair<std::string, std::vector<std::string>>>{
           {"malware", {"blacklisted-download", "irc-increase", "ad-traffic-increase"}}, {"icu", {"HH3", "HRVL"}}}) {
    const PlanningProblem p = compile(hftest::bundled(name), Trace::from_symbols(syms), CostParams{});
    const PddlFiles f = export_pddl(p);
    EXPECT_TRUE(structurally_equal(p, read_pddl(f.domain, f.problem))) << name;
  }
}

TEST(Pddl, TamperedCostDetected) {
  const PlanningProblem p = compile(hftest::bundled("icu"), Trace::from_symbols({"HH3", "HRVL"}), CostParams{});
  PddlFiles f = export_pddl(p);
  const std::string needle = "(increase (total-cost) 10)";
  const auto pos = f.domain.find(needle);
  ASSERT_NE(pos, std::string::npos);
  f.domain.replace(pos, needle.size(), "(increase (total-cost) 11)");
  EXPECT_FALSE(structurally_equal(p, read_pddl(f.domain, f.problem)));

  PddlFiles g = export_pddl(p);
  const auto hdr = g.problem.find("discard=100");
  g.problem.replace(hdr, 11, "discard=200");
  EXPECT_FALSE(structurally_equal(p, read_pddl(g.domain, g.problem)));
}

TEST(Pddl, MalformedInputReportsLine) {
  const PlanningProblem p = compile(hftest::bundled("icu"), Trace::from_symbols({"HH3"}), CostParams{});
  const PddlFiles f = export_pddl(p);

  std::string bad_cost = f.domain;
  const auto pos = bad_cost.find("(increase (total-cost) 10)");
  bad_cost.replace(pos, 26, "(increase (total-cost) ten)");
  try {
    read_pddl(bad_cost, f.problem);
    FAIL();
  } catch (const PddlError& e) {
    EXPECT_EQ(e.line(), line_of(bad_cost, pos));
  }

  std::string unclosed = f.domain;
  const auto last = unclosed.rfind(')');
  unclosed.erase(last);
  EXPECT_THROW(read_pddl(unclosed, f.problem), PddlError);

  std::string stray = f.problem;
  const auto goal = stray.find("(:goal");
  stray.insert(goal, ")");
  try {
    read_pddl(f.domain, stray);
    FAIL();
  } catch (const PddlError& e) {
    EXPECT_EQ(e.line(), line_of(stray, goal));
  }

  std::string unknown = f.domain;
  const auto pre = unknown.find("(idle)", unknown.find(":precondition"));
  unknown.replace(pre, 6, "(zzz)");
  try {
    read_pddl(unknown, f.problem);
    FAIL();
  } catch (const PddlError& e) {
    EXPECT_EQ(e.line(), line_of(unknown, pre));
  }
}

TEST(Pddl, CaseInsensitiveCollisionRejected) {
  const auto m = hftest::must_parse("default <good>\nabc {x} -> ABC\nABC {y}\nstart: abc\n");
  EXPECT_THROW(export_pddl(compile(m, Trace::from_symbols({"x"}), CostParams{})), std::invalid_argument);
}
