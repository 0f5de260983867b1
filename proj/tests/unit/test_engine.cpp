#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "expected_traces.hpp"
#include "passflow/engine/engine.hpp"
#include "passflow/engine/scripted.hpp"
#include "test_support.hpp"
#include "trace_support.hpp"

using namespace passflow;
using namespace passflow::engine;
using passflow::testing::error_code_of;
using passflow::testing::read_data;
using passflow::testing::summarize;
using runtime::Json;
namespace expected = passflow::testing::expected;

namespace {

constexpr double kApplicantScale = 200.0 / 1209600000.0;  // P14D -> 200 ms

std::shared_ptr<const compile::CompiledModel> compile_file(const std::string& path) {
  auto kind = *source_kind_from_path(path);
  return std::make_shared<const compile::CompiledModel>(compile::compile(load_pass(read_data(path), kind)));
}

RunResult run_applicant(const std::string& script, runtime::SchedulePolicy policy = runtime::SchedulePolicy::Fifo,
                        std::uint64_t seed = 0) {
  RunOptions o;
  o.policy = policy;
  o.seed = seed;
  o.timeScale = kApplicantScale;
  return run_scripted(compile_file("bpmn/applicant_company.bpmn"),
                      InteractionScript::parse(read_data("scripts/applicant_" + script + ".json")), o);
}

}  // namespace

TEST_CASE("script parsing") {
  auto s = InteractionScript::parse(
      R"({"rules":[{"subject":"Company","state":"Check application","choice":"invite","repeat":0,"delayMs":5,"values":{"a":1}}]})");
  REQUIRE(s.rules.size() == 1);
  CHECK(s.rules[0].repeat == 0);
  CHECK(s.rules[0].delayMs == 5);
  CHECK(s.rules[0].values["a"] == 1);
  CHECK(error_code_of([] { InteractionScript::parse("{"); }) == Errc::DecodeError);
  CHECK(error_code_of([] { InteractionScript::parse(R"({"rules":[{"state":"x"}]})"); }) == Errc::DecodeError);
  CHECK(error_code_of([] { InteractionScript::parse(R"({"rules":[{"subject":"a","state":"x","delayMs":-1}]})"); }) ==
        Errc::DecodeError);
}

TEST_CASE("applicant scenarios produce the hand-derived traces") {
  SUBCASE("invitation") {
    auto r = run_applicant("invite");
    CHECK(r.outcome == RunOutcome::Completed);
    CHECK(summarize(r.trace) == expected::applicant_invite());
  }
  SUBCASE("rejection") {
    auto r = run_applicant("reject");
    CHECK(r.outcome == RunOutcome::Completed);
    CHECK(summarize(r.trace) == expected::applicant_reject());
  }
  SUBCASE("timeout before the late reply") {
    auto r = run_applicant("late_reply");
    CHECK(r.outcome == RunOutcome::Completed);
    CHECK(summarize(r.trace) == expected::applicant_late_reply());
    for (const auto& e : r.trace) {
      if (e.event == "timerFired") CHECK(e.t == 200);
      if (e.event == "taskCompleted") CHECK(e.t == 500);
    }
    CHECK(testing::count(r.trace, "timerFired") == 1);
    CHECK(r.endTime == 500);
  }
}

TEST_CASE("applicant subject projections hold under seeded schedules") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    auto fifo = run_applicant("invite");
    auto seeded = run_applicant("invite", runtime::SchedulePolicy::Seeded, seed);
    CHECK(seeded.outcome == RunOutcome::Completed);
    for (const auto* s : {"Applicant", "Company"}) {
      CHECK(testing::project(seeded.trace, s) == testing::project(fifo.trace, s));
    }
  }
}

TEST_CASE("same seed and script give byte-identical traces") {
  for (std::uint64_t seed : {0u, 7u, 12345u}) {
    auto a = run_applicant("invite", runtime::SchedulePolicy::Seeded, seed);
    auto b = run_applicant("invite", runtime::SchedulePolicy::Seeded, seed);
    CHECK(a.trace_jsonl() == b.trace_jsonl());
  }
}

TEST_CASE("a run without a matching rule stalls with the pending task") {
  RunOptions o;
  o.timeScale = kApplicantScale;
  auto r = run_scripted(compile_file("bpmn/applicant_company.bpmn"), {}, o);
  CHECK(r.outcome == RunOutcome::Stalled);
  REQUIRE(r.pending.size() == 1);
  CHECK(r.pending[0].context.subjectLabel == "Company");
  CHECK(r.pending[0].context.stateLabel == "Check application");
  CHECK(r.pending[0].choices == std::vector<std::string>{"invite", "reject"});
  // The applicant's timer has fired by then; only the company is left.
  CHECK(testing::count(r.trace, "timerFired") == 1);
}

TEST_CASE("service interaction patterns") {
  struct Case {
    const char* file;
    expected::Lines (*trace)();
  };
  for (auto c : {Case{"bpmn/pattern_send.bpmn", expected::pattern_send},
                 Case{"bpmn/pattern_receive.bpmn", expected::pattern_receive},
                 Case{"bpmn/pattern_send_receive.bpmn", expected::pattern_send_receive},
                 Case{"bpmn/pattern_racing.bpmn", expected::pattern_racing}}) {
    CAPTURE(c.file);
    auto model = compile_file(c.file);
    RunOptions fifo;
    fifo.policy = runtime::SchedulePolicy::Fifo;
    auto r = run_scripted(model, {}, fifo);
    CHECK(r.outcome == RunOutcome::Completed);
    CHECK(summarize(r.trace) == c.trace());
  }
}

TEST_CASE("model store") {
  ModelStore store;
  const auto& a = store.add(read_data("bpmn/applicant_company.bpmn"), SourceKind::Bpmn);
  CHECK(a.compiled->programs.size() == 2);
  CHECK(a.name == "Job application");
  const auto& b = store.add(read_data("bpmn/applicant_company.bpmn"), SourceKind::Bpmn, "again");
  CHECK(a.modelId != b.modelId);
  CHECK(store.list().size() == 2);
  // Stored artifacts match a fresh compile of the stored source.
  auto fresh = compile::compile(load_pass(a.source, a.kind));
  CHECK(artifacts_text(fresh) == a.artifacts);
  CHECK(error_code_of([&] { store.get("model-99"); }) == Errc::NotFound);

  try {
    store.add(read_data("owl/unhandled_exchange.owl"), SourceKind::Owl);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidationError);
    REQUIRE_FALSE(e.details().empty());
    CHECK(e.details()[0].find("X_Decline") != std::string::npos);
  }
  CHECK(store.list().size() == 2);
  CHECK(error_code_of([&] { store.add("<definitions", SourceKind::Bpmn); }) == Errc::MalformedXml);
}

TEST_CASE("model store mirrors records to the data directory") {
  auto dir = std::filesystem::temp_directory_path() / "passflow_store_test";
  std::filesystem::remove_all(dir);
  ModelStore store({}, dir);
  const auto& r = store.add(read_data("owl/customer_companies.owl"), SourceKind::Owl);
  CHECK(std::filesystem::exists(dir / "models" / r.modelId / "source.owl"));
  std::ifstream in(dir / "models" / r.modelId / "compiled.txt");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == r.artifacts);
  std::filesystem::remove_all(dir);
}

TEST_CASE("engine lifecycle and task brokering") {
  std::ostringstream log;
  EngineOptions options;
  options.runtime.policy = runtime::SchedulePolicy::Fifo;
  options.log = &log;
  Engine engine(options);
  auto model = engine.upload_model(read_data("owl/customer_companies.owl"), SourceKind::Owl);

  std::vector<std::string> started;
  auto id = engine.start_instance(model.modelId, "order 1", &started);
  CHECK(started == std::vector<std::string>{"Customer"});
  auto st = engine.status(id);
  CHECK(st.active);
  CHECK(st.instanceName == "order 1");
  REQUIRE(st.subjects.size() == 2);

  auto tasks = engine.list_tasks(id);
  REQUIRE(tasks.size() == 1);
  bool hasDate = false;
  for (const auto& f : tasks[0].fields) hasDate |= f.fieldType == pass::FieldType::Date;
  CHECK(hasDate);

  CHECK(error_code_of([&] { engine.complete_task(tasks[0].requestId, Json::object()); }) == Errc::ValidationError);
  CHECK(engine.list_tasks(id).size() == 1);

  Json values = Json::object();
  for (const auto& f : tasks[0].fields) {
    if (f.readOnly) continue;
    values[f.name] = f.fieldType == pass::FieldType::Integer ? Json(2)
                     : f.fieldType == pass::FieldType::Date  ? Json("2025-01-31")
                                                             : Json("gears");
  }
  engine.complete_task(tasks[0].requestId, values);
  tasks = engine.list_tasks(id);
  REQUIRE(tasks.size() == 1);
  CHECK(tasks[0].context.subjectLabel == "Company");
  CHECK(tasks[0].choices == std::vector<std::string>{"deliver", "decline"});
  for (const auto& f : tasks[0].fields) {
    if (f.name == "quantity") CHECK(f.readOnly);
    if (f.name == "quantity") CHECK(f.value == 2);
  }
  engine.complete_task(tasks[0].requestId, Json{{"deliveryDate", "2025-02-03"}}, "deliver");
  for (int guard = 0; guard < 10; ++guard) {
    tasks = engine.list_tasks(id);
    if (tasks.empty()) break;
    Json rest = Json::object();
    for (const auto& f : tasks[0].fields) {
      if (!f.readOnly) rest[f.name] = f.value.is_null() ? Json("x") : f.value;
    }
    engine.complete_task(tasks[0].requestId, rest, tasks[0].choices.empty() ? "" : tasks[0].choices[0]);
  }
  st = engine.status(id);
  CHECK_FALSE(st.active);
  for (const auto& s : st.subjects) CHECK_FALSE(s.alive);

  auto id2 = engine.start_instance(model.modelId, "order 2");
  CHECK(id2 != id);
  engine.stop_instance(id2);
  CHECK_FALSE(engine.status(id2).active);
  CHECK(engine.list_tasks(id2).empty());

  CHECK(error_code_of([&] { engine.status("inst-404"); }) == Errc::NotFound);
  CHECK(error_code_of([&] { engine.stop_instance("inst-404"); }) == Errc::NotFound);
  CHECK(error_code_of([&] { engine.start_instance("model-404", "x"); }) == Errc::NotFound);

  // Every line is JSON with the documented keys; state changes carry the
  // instance id.
  std::istringstream lines(log.str());
  std::string line;
  std::size_t n = 0, withInstance = 0;
  while (std::getline(lines, line)) {
    auto j = Json::parse(line);
    for (const auto* k : {"ts", "instanceId", "subject", "event", "detail"}) CHECK(j.contains(k));
    if (j["event"] == "stateEntered" || j["event"] == "taskCompleted" || j["event"] == "instanceStarted") {
      CHECK(j["instanceId"] != "");
      ++withInstance;
    }
    ++n;
  }
  CHECK(n > 10);
  CHECK(withInstance > 5);
}

TEST_CASE("engine timers advance on demand without a driver thread") {
  EngineOptions options;
  options.runtime.timeScale = kApplicantScale;
  Engine engine(options);
  auto model = engine.upload_model(read_data("bpmn/applicant_company.bpmn"), SourceKind::Bpmn);
  auto id = engine.start_instance(model.modelId, "x");
  engine.advance(199);
  CHECK(engine.status(id).subjects[0].stateId == "Wait_Answer");
  engine.advance(1);
  CHECK(engine.status(id).subjects[0].stateId == "End_NoAnswer");
}

TEST_CASE("realtime engine fires scaled timers on its own") {
  EngineOptions options;
  options.runtime.timeScale = 50.0 / 1209600000.0;
  options.realtime = true;
  Engine engine(options);
  auto model = engine.upload_model(read_data("bpmn/applicant_company.bpmn"), SourceKind::Bpmn);
  auto id = engine.start_instance(model.modelId, "x");
  for (int i = 0; i < 200 && engine.status(id).subjects[0].stateId != "End_NoAnswer"; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  CHECK(engine.status(id).subjects[0].stateId == "End_NoAnswer");
}
