#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hypforge/diagnostic.hpp"
#include "hypforge/hypothesis.hpp"
#include "hypforge/parser.hpp"
#include "support.hpp"

using namespace hypforge;

namespace {

const CostParams kDefault{};

Hypothesis steps(std::vector<Step> s) {
  Hypothesis h;
  h.steps = std::move(s);
  return h;
}

EnterState good(const std::string& id, std::vector<std::size_t> ex = {}) {
  return EnterState{id, StateType::good, std::move(ex)};
}
EnterState bad(const std::string& id, std::vector<std::size_t> ex = {}) {
  return EnterState{id, StateType::bad, std::move(ex)};
}

}  // namespace

TEST(CostParams, DefaultsAndOrdering) {
  EXPECT_EQ(kDefault.discard_cost, 100);
  EXPECT_EQ(kDefault.good_entry_cost, 1);
  EXPECT_EQ(kDefault.bad_entry_cost, 10);
  EXPECT_EQ(kDefault.unobserved_step_cost, 5);
  EXPECT_NO_THROW(kDefault.check());
  EXPECT_THROW(CostParams::make(100, 10, 10, 5), std::invalid_argument);
  EXPECT_THROW(CostParams::make(10, 1, 10, 5), std::invalid_argument);
  EXPECT_THROW(CostParams::make(100, 1, 10, 0), std::invalid_argument);
  EXPECT_THROW(CostParams::make(100, -1, 10, 5), std::invalid_argument);
}

TEST(CostOf, EmptyTraceIsStartEntryOnly) {
  EXPECT_EQ(cost_of(steps({good("start")}), kDefault), 1);
}

TEST(CostOf, OneExplainedPlusDiscard) {
  EXPECT_EQ(cost_of(steps({good("A", {0}), Discard{1}}), kDefault), 101);
}

TEST(CostOf, UnobservedAndHyperSurcharges) {
  // start(1) + X unobserved bad(10+5) + H(5) + Y good explaining 0 (1)
  EXPECT_EQ(cost_of(steps({good("S"), bad("X"), EnterHyperstate{"H"}, good("Y", {0})}), kDefault), 22);
}

TEST(CostOf, MalwareCrawlerCheaperThanInfectionChain) {
  // trace (blacklisted-download, ad-traffic-increase)
  const Hypothesis crawler = steps({good("start"), good("Crawling", {0, 1})});
  const Hypothesis infection = steps({good("start"), bad("DriveByDownload", {0}), EnterHyperstate{"CC_RENDEZVOUS"},
                                      bad("ClickFraud", {1})});
  const auto model = hftest::bundled("malware");
  const Trace trace = Trace::from_symbols({"blacklisted-download", "ad-traffic-increase"});
  EXPECT_TRUE(validate_hypothesis(model, trace, crawler, model.state_count()).empty());
  EXPECT_TRUE(validate_hypothesis(model, trace, infection, model.state_count()).empty());
  EXPECT_EQ(cost_of(crawler, kDefault), 2);
  EXPECT_EQ(cost_of(infection, kDefault), 26);
  EXPECT_TRUE(std::is_lt(compare_plausibility(crawler, infection, kDefault)));
}

TEST(CostOf, RejectsStructurallyInvalid) {
  EXPECT_THROW(cost_of(steps({}), kDefault), std::invalid_argument);
  EXPECT_THROW(cost_of(steps({Discard{0}}), kDefault), std::invalid_argument);
  EXPECT_THROW(cost_of(steps({good("A", {0}), Discard{0}}), kDefault), std::invalid_argument);
  EXPECT_THROW(cost_of(steps({good("A", {1})}), kDefault), std::invalid_argument);
}

TEST(ComparePlausibility, ReflexiveAndDiscardSensitive) {
  const Hypothesis a = steps({good("A", {0}), good("B", {1})});
  EXPECT_EQ(compare_plausibility(a, a, kDefault), std::weak_ordering::equivalent);
  const Hypothesis b = steps({good("A", {0}), Discard{1}});
  EXPECT_TRUE(std::is_lt(compare_plausibility(a, b, kDefault)));
  EXPECT_THROW(compare_plausibility(a, steps({good("A", {0})}), kDefault), std::invalid_argument);
}

TEST(ComparePlausibility, IcuHrvlHypothesesOrderedByCost) {
  const Hypothesis highrisk = steps({good("Unadmitted"), bad("Highrisk", {0, 1})});
  const Hypothesis noLead = steps({good("Unadmitted"), bad("Highrisk", {0}), good("PatientNoLead", {1})});
  const Hypothesis infarction = steps({good("Unadmitted"), bad("Highrisk", {0}), bad("Infarction", {1})});
  const Hypothesis dci = steps({good("Unadmitted"), bad("Highrisk", {0}), bad("DCI", {1})});
  EXPECT_TRUE(std::is_lt(compare_plausibility(highrisk, noLead, kDefault)));
  EXPECT_TRUE(std::is_lt(compare_plausibility(noLead, infarction, kDefault)));
  EXPECT_EQ(compare_plausibility(infarction, dci, kDefault), std::weak_ordering::equivalent);
}

// Properties over random valid hypotheses from the brute-force enumerator.
class CostProperties : public ::testing::Test {
 protected:
  void SetUp() override {
    model_ = hftest::must_parse(
        "default <good>\n"
        "A {x y} -> B | C\n"
        "B <bad> {y} -> C\n"
        "C {x z} -> A\n"
        "start: A\n");
    trace_ = Trace::from_symbols({"x", "y", "z"});
    all_ = hftest::brute_force(model_, trace_, 2, kDefault);
    ASSERT_GT(all_.size(), 20u);
  }
  ModelSpec model_;
  Trace trace_;
  std::vector<Hypothesis> all_;
};

TEST_F(CostProperties, InsertingDiscardAddsExactlyDiscardCost) {
  for (const auto& h : all_) {
    // Turn the last explained index into a discard placed right after its
    // state occurrence: the coverage stays exact, one more discard.
    Hypothesis g = h;
    for (std::size_t k = g.steps.size(); k-- > 0;) {
      auto* s = std::get_if<EnterState>(&g.steps[k]);
      if (!s || s->explained.empty()) continue;
      const std::size_t idx = s->explained.back();
      s->explained.pop_back();
      if (s->explained.empty() && k > 0) break;  // would also become unobserved
      g.steps.insert(g.steps.begin() + static_cast<long>(k) + 1, Discard{idx});
      EXPECT_EQ(cost_of(g, kDefault), cost_of(h, kDefault) + kDefault.discard_cost) << hftest::steps_key(h);
      break;
    }
  }
}

TEST_F(CostProperties, BadForGoodSwapStrictlyIncreases) {
  for (const auto& h : all_) {
    for (std::size_t k = 0; k < h.steps.size(); ++k) {
      auto* s = std::get_if<EnterState>(&h.steps[k]);
      if (!s || s->type != StateType::good) continue;
      Hypothesis g = h;
      std::get<EnterState>(g.steps[k]).type = StateType::bad;
      EXPECT_GT(cost_of(g, kDefault), cost_of(h, kDefault));
      EXPECT_TRUE(std::is_gt(compare_plausibility(g, h, kDefault)));
    }
  }
}

TEST_F(CostProperties, TotalPreorder) {
  const std::size_t n = std::min<std::size_t>(all_.size(), 40);
  for (std::size_t a = 0; a < n; ++a) {
    EXPECT_EQ(compare_plausibility(all_[a], all_[a], kDefault), std::weak_ordering::equivalent);
    for (std::size_t b = 0; b < n; ++b) {
      const auto ab = compare_plausibility(all_[a], all_[b], kDefault);
      EXPECT_EQ(ab, cost_of(all_[a], kDefault) <=> cost_of(all_[b], kDefault));
      EXPECT_EQ(ab, 0 <=> compare_plausibility(all_[b], all_[a], kDefault));
      for (std::size_t c = 0; c < n; ++c) {
        if (ab <= 0 && compare_plausibility(all_[b], all_[c], kDefault) <= 0) {
          EXPECT_TRUE(std::is_lteq(compare_plausibility(all_[a], all_[c], kDefault)));
        }
      }
    }
  }
}

TEST_F(CostProperties, DroppingOrDuplicatingAnIndexIsRejected) {
  std::mt19937_64 rng(11);
  for (const auto& h : all_) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (step, position in explained)
    for (std::size_t k = 0; k < h.steps.size(); ++k) {
      if (auto* s = std::get_if<EnterState>(&h.steps[k])) {
        for (std::size_t p = 0; p < s->explained.size(); ++p) slots.emplace_back(k, p);
      }
    }
    if (slots.empty()) continue;
    const auto [k, p] = slots[rng() % slots.size()];

    const std::size_t idx = std::get<EnterState>(h.steps[k]).explained[p];
    Hypothesis dropped = h;
    auto& ex = std::get<EnterState>(dropped.steps[k]).explained;
    ex.erase(ex.begin() + static_cast<long>(p));
    EXPECT_FALSE(validate_hypothesis(model_, trace_, dropped, 2).empty());
    // without the trace, losing the last index just looks like a shorter trace
    if (idx + 1 < trace_.size()) EXPECT_THROW(cost_of(dropped, kDefault), std::invalid_argument);

    Hypothesis dup = h;
    dup.steps.push_back(Discard{idx});
    EXPECT_FALSE(validate_hypothesis(model_, trace_, dup, 2).empty());
    EXPECT_THROW(cost_of(dup, kDefault), std::invalid_argument);
  }
}

TEST(ValidateHypothesis, TransitionsAndObservationsChecked) {
  const auto model = hftest::must_parse("default <good>\nA {x} -> B\nB {y}\nC {x}\nstart: A\n");
  const Trace t = Trace::from_symbols({"x", "y"});
  EXPECT_TRUE(validate_hypothesis(model, t, steps({good("A", {0}), good("B", {1})}), 3).empty());
  EXPECT_FALSE(validate_hypothesis(model, t, steps({good("A", {0}), good("C", {1})}), 3).empty());
  EXPECT_FALSE(validate_hypothesis(model, t, steps({good("A", {0, 1})}), 3).empty());
  EXPECT_FALSE(validate_hypothesis(model, t, steps({good("B", {1}), Discard{0}}), 3).empty());
}

TEST(ValidateModel, MalwareIsClean) { EXPECT_TRUE(validate_model(hftest::bundled("malware")).empty()); }

TEST(ValidateModel, UnknownStartState) {
  ModelSpec m = hftest::must_parse("default <good>\nS {a}\nstart: S\n");
  m.start_state = "Nowhere";
  const auto ds = validate_model(m);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "unknown-start");
  EXPECT_NE(ds[0].message.find("unknown start state"), std::string::npos);
}

TEST(ValidateModel, TransitionToUndeclaredStateNamedWithSpan) {
  ModelSpec m = hftest::must_parse("default <good>\nS {a} -> T\nT {b}\nstart: S\n");
  SourceSpan span{20, 2, 10, 1};
  m.hyperstates[0].members[0].outgoing = {Transition{"X", span}};
  const auto ds = validate_model(m);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "unknown-state");
  EXPECT_NE(ds[0].message.find("'X'"), std::string::npos);
  EXPECT_EQ(ds[0].span, span);
}

TEST(ValidateModel, DuplicateAndEmptyHyperstate) {
  ModelSpec m = hftest::must_parse("default <good>\nS {a} -> T\nT {b}\nstart: S\n");
  m.hyperstates[1].members[0].id = "S";
  m.hyperstates[1].id = "S";
  EXPECT_TRUE(has_errors(validate_model(m)));
  ModelSpec e = hftest::must_parse("default <good>\nH {\n  S {a}\n}\nstart: S\n");
  e.hyperstates[0].members.clear();
  EXPECT_TRUE(has_errors(validate_model(e)));
}
