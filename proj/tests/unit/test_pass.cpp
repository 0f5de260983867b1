#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "passflow/pass.hpp"
#include "sample_models.hpp"
#include "test_support.hpp"

using namespace passflow;
using namespace passflow::pass;
using passflow::testing::ping_model;

namespace {

bool has_rule(const ValidationReport& r, const std::string& rule, const std::string& id) {
  return std::any_of(r.findings.begin(), r.findings.end(),
                     [&](const Finding& f) { return f.rule == rule && f.componentId == id; });
}

}  // namespace

TEST_CASE("valid model has an empty report") {
  auto r = validate(ping_model());
  CHECK(r.ok());
  CHECK_MESSAGE(r.findings.empty(), r.to_string());
}

TEST_CASE("exchange without a send transition is unhandled") {
  auto m = ping_model();
  auto& a = m.behaviors.at("A");
  a.states[0].kind = StateKind::Do;
  a.transitions[0].kind = TransitionKind::Do;
  a.transitions[0].condition = std::monostate{};
  auto r = validate(m);
  REQUIRE(has_rule(r, "unhandled-exchange", "X"));
  auto it = std::find_if(r.findings.begin(), r.findings.end(), [](const Finding& f) { return f.componentId == "X"; });
  CHECK(it->message.find("unhandled exchange") != std::string::npos);
}

TEST_CASE("two initial states") {
  auto m = ping_model();
  m.behaviors.at("B").states[1].isInitial = true;
  auto r = validate(m);
  CHECK(r.has_errors());
  bool found = std::any_of(r.findings.begin(), r.findings.end(),
                           [](const Finding& f) { return f.message.find("multiple initial states") != std::string::npos; });
  CHECK(found);
}

TEST_CASE("reference to an exchange absent from the list") {
  auto m = ping_model();
  std::get<SendCondition>(m.behaviors.at("A").transitions[0].condition).messageExchange = "Ghost";
  auto r = validate(m);
  CHECK(has_rule(r, "unknown-exchange", "TA"));
  CHECK(has_rule(r, "unhandled-exchange", "X"));
}

TEST_CASE("behavior invariants") {
  SUBCASE("dangling transition") {
    auto m = ping_model();
    m.behaviors.at("B").transitions[0].targetState = "Nowhere";
    CHECK(has_rule(validate(m), "dangling-transition", "TB"));
  }
  SUBCASE("no end state") {
    auto m = ping_model();
    m.behaviors.at("B").states[1].isEnd = false;
    auto r = validate(m);
    CHECK(has_rule(r, "no-end-state", "BB"));
    CHECK(has_rule(r, "dead-end-state", "B2"));
  }
  SUBCASE("missing action") {
    auto m = ping_model();
    m.behaviors.at("A").states[1].actionId.clear();
    CHECK(has_rule(validate(m), "missing-action", "A2"));
  }
  SUBCASE("duplicate ids across elements") {
    auto m = ping_model();
    m.behaviors.at("B").states[1].componentId = "A2";
    m.behaviors.at("B").transitions[0].targetState = "A2";
    CHECK(has_rule(validate(m), "duplicate-component-id", "A2"));
  }
  SUBCASE("self exchange") {
    auto m = ping_model();
    m.messageExchangeList[0].receiver = "A";
    CHECK(has_rule(validate(m), "exchange-self", "X"));
  }
  SUBCASE("empty model") {
    PassModel m;
    m.componentId = "M";
    CHECK(has_rule(validate(m), "no-subjects", "M"));
  }
}

TEST_CASE("validation is order independent") {
  auto m = ping_model();
  m.behaviors.at("B").states[1].isEnd = false;
  m.messageExchangeList[0].receiver = "A";
  auto expected = validate(m).findings;
  std::mt19937 rng(7);
  for (int i = 0; i < 10; ++i) {
    auto shuffled = m;
    std::shuffle(shuffled.subjects.begin(), shuffled.subjects.end(), rng);
    for (auto& [id, b] : shuffled.behaviors) {
      std::shuffle(b.states.begin(), b.states.end(), rng);
      std::shuffle(b.transitions.begin(), b.transitions.end(), rng);
    }
    CHECK(validate(shuffled).findings == expected);
  }
}

TEST_CASE("choice label falls back to the transition label") {
  Transition t{"T", "invite", TransitionKind::Do, "a", "b", std::monostate{}, {}};
  CHECK(t.choice_label() == "invite");
  t.condition = DoCondition{"Tc", "score > 5"};
  CHECK(t.choice_label() == "score > 5");
}
