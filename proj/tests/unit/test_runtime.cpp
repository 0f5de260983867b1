#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <map>
#include <set>

#include "model_builder.hpp"
#include "runtime_models.hpp"
#include "passflow/compile.hpp"
#include "passflow/owl.hpp"
#include "passflow/runtime/runtime.hpp"
#include "test_support.hpp"
#include "trace_support.hpp"

using namespace passflow;
using namespace passflow::runtime;
using passflow::testing::error_code_of;
using namespace passflow::testing;
using passflow::testing::ModelBuilder;
using passflow::testing::rw;
using passflow::testing::ro;
using passflow::testing::summarize;
using pass::FieldType;
using pass::StateKind;

namespace {

std::shared_ptr<const compile::CompiledModel> compiled(const pass::PassModel& m) {
  return std::make_shared<const compile::CompiledModel>(compile::compile(m));
}

RuntimeOptions fifo() { return {SchedulePolicy::Fifo, 0, 1.0}; }

ProcessActor* actor_of(Runtime& rt, const std::string& instance, const std::string& subject) {
  auto entries = rt.director().registry().entries(instance);
  auto it = entries.find(subject);
  return it == entries.end() ? nullptr : rt.system().find_as<ProcessActor>(it->second);
}


std::uint64_t task_for(Runtime& rt, const std::string& state) {
  for (const auto& r : rt.pending()) {
    if (r.context.stateId == state) return r.requestId;
  }
  FAIL("no task for " << state);
  return 0;
}

}  // namespace

TEST_CASE("engine message JSON codec round-trips and rejects malformed envelopes") {
  EngineMessage m{MessageType::Process, "i1", {7, "server"}, {{"exchangeId", "X"}, {"senderSubject", "A"}, {"payload", {{"n", 1}}}}};
  auto back = decode(encode(m));
  CHECK(back.type == m.type);
  CHECK(back.instanceId == "i1");
  CHECK(back.sender == m.sender);
  CHECK(back.body == m.body);

  CHECK(error_code_of([] { decode(Json{{"type", "warp"}, {"sender", {{"id", 1}, {"system", "s"}}}}); }) ==
        Errc::DecodeError);
  CHECK(error_code_of([] { decode(Json{{"type", "process"}, {"sender", {{"id", 1}, {"system", "s"}}}}); }) ==
        Errc::DecodeError);  // process traffic needs an instance
  CHECK_NOTHROW(decode(Json{{"type", "addressbook"}, {"sender", {{"id", 1}, {"system", "s"}}}}));
  for (auto t : {MessageType::Register, MessageType::Deregister, MessageType::Addressbook, MessageType::Init,
                 MessageType::Process, MessageType::IoRequest, MessageType::IoAck, MessageType::IoComplete,
                 MessageType::IoCancel, MessageType::Wakeup, MessageType::Exit}) {
    CHECK(message_type_from_string(to_string(t)) == t);
  }
}

TEST_CASE("instance registry") {
  InstanceRegistry r;
  r.open("i1", {"first", "M"});
  r.open("i2", {"second", "M"});
  CHECK(error_code_of([&] { r.open("i1", {}); }) == Errc::DuplicateInstance);

  ActorAddress a{10, "server"}, b{11, "server"}, b2{12, "server"};
  CHECK(r.register_actor("i1", "A", a).outcome == RegisterOutcome::Added);
  SUBCASE("same subject and address twice is idempotent") {
    CHECK(r.register_actor("i1", "A", a).outcome == RegisterOutcome::AlreadyRegistered);
    CHECK(r.entries("i1").size() == 1);
  }
  SUBCASE("an occupied slot answers with the holder") {
    CHECK(r.register_actor("i1", "B", b).outcome == RegisterOutcome::Added);
    auto dup = r.register_actor("i1", "B", b2);
    CHECK(dup.outcome == RegisterOutcome::Duplicate);
    CHECK(dup.winner == b);
    CHECK(r.entries("i1").at("B") == b);
  }
  SUBCASE("an address belongs to one instance") {
    CHECK(error_code_of([&] { r.register_actor("i2", "A", a); }) == Errc::CrossInstanceConflict);
    CHECK(r.entries("i2").empty());
  }
  SUBCASE("deregistered subjects stay exited") {
    CHECK(r.deregister(a, "A9") == std::optional<std::string>("i1"));
    CHECK(r.entries("i1").empty());
    CHECK(r.exited("i1").at("A") == "A9");
    CHECK(r.register_actor("i1", "A", b).outcome == RegisterOutcome::SubjectExited);
    CHECK_FALSE(r.deregister(a, "").has_value());
  }
  SUBCASE("closed instances take no newcomers") {
    r.close("i1");
    CHECK(r.register_actor("i1", "B", b).outcome == RegisterOutcome::InstanceClosed);
  }
  CHECK(error_code_of([&] { r.register_actor("nope", "A", b); }) == Errc::NotFound);
}

namespace {

struct Recorder : Actor {
  std::vector<EngineMessage> got;
  void receive(const EngineMessage& m) override { got.push_back(m); }
};

struct Chatter : Actor {
  ActorAddress peer;
  int count = 0;
  void receive(const EngineMessage&) override {
    for (int i = 0; i < count; ++i) send(peer, {MessageType::Process, "i", {}, {{"k", i}}});
  }
};

}  // namespace

TEST_CASE("actor system keeps per-channel order under any seed") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ActorSystem sys(SchedulePolicy::Seeded, seed);
    auto& sink = sys.spawn<Recorder>("server", "i");
    auto& a = sys.spawn<Chatter>("server", "i");
    auto& b = sys.spawn<Chatter>("server", "i");
    a.peer = b.peer = sink.address();
    a.count = b.count = 5;
    sys.post(a.address(), {MessageType::Init, "i", {}, {}});
    sys.post(b.address(), {MessageType::Init, "i", {}, {}});
    sys.run_until_idle();
    REQUIRE(sink.got.size() == 10);
    int nextA = 0, nextB = 0;
    for (const auto& m : sink.got) {
      int& next = m.sender == a.address() ? nextA : nextB;
      CHECK(m.body["k"] == next++);
    }
  }
}

TEST_CASE("virtual clock fires timers in due order only when advanced") {
  ActorSystem sys;
  auto& r = sys.spawn<Recorder>("management", "");
  sys.schedule(r.address(), 50, {MessageType::Wakeup, "", r.address(), {{"token", 2}}});
  sys.schedule(r.address(), 10, {MessageType::Wakeup, "", r.address(), {{"token", 1}}});
  sys.run_until_idle();
  CHECK(r.got.empty());
  CHECK(sys.next_timer_due() == 10);
  sys.advance_to(49);
  sys.run_until_idle();
  REQUIRE(r.got.size() == 1);
  CHECK(r.got[0].body["token"] == 1);
  CHECK(sys.now() == 49);
  sys.advance_to(50);
  sys.run_until_idle();
  CHECK(r.got.size() == 2);
  CHECK_FALSE(sys.next_timer_due().has_value());
}

TEST_CASE("spawning on an unknown system is a placement error") {
  ActorSystem sys;
  CHECK(error_code_of([&] { sys.spawn<Recorder>("mars", ""); }) == Errc::PlacementError);
  sys.add_system("mars");
  CHECK_NOTHROW(sys.spawn<Recorder>("mars", ""));
}

TEST_CASE("process messages to a stopped actor follow its forward address or are traced as dropped") {
  ActorSystem sys(SchedulePolicy::Fifo);
  auto& winner = sys.spawn<Recorder>("server", "i");
  auto& loser = sys.spawn<Recorder>("server", "i");
  auto& gone = sys.spawn<Recorder>("server", "i");
  auto loserAddr = loser.address(), goneAddr = gone.address();
  sys.stop(loserAddr, winner.address());
  sys.stop(goneAddr);
  EngineMessage m{MessageType::Process, "i", {99, "server"}, {{"exchangeId", "X"}, {"senderSubject", "A"}}};
  sys.post(loserAddr, m);
  sys.post(goneAddr, m);
  sys.run_until_idle();
  CHECK(winner.got.size() == 1);
  CHECK(summarize(sys.trace_log().events()) == std::vector<std::string>{"- messageDropped X recipientGone"});
}

TEST_CASE("start_instance") {
  SUBCASE("customer/companies starts only the customer") {
    auto model = owl::read(testing::read_data("owl/customer_companies.owl"));
    Runtime rt(fifo());
    auto started = rt.start_instance(compiled(model), "i1", "order 1");
    CHECK(started == std::vector<std::string>{"Customer"});
    rt.system().run_until_idle();
    auto st = rt.status("i1");
    REQUIRE(st.subjects.size() == 2);
    for (const auto& s : st.subjects) {
      if (s.subjectId == "Customer") {
        CHECK(s.alive);
        CHECK(s.stateLabel == "Prepare order");
      } else {
        CHECK_FALSE(s.alive);
        CHECK(s.stateId.empty());
      }
    }
    SUBCASE("reusing the id is rejected") {
      CHECK(error_code_of([&] { rt.start_instance(compiled(model), "i1", "again"); }) == Errc::DuplicateInstance);
    }
  }
  SUBCASE("every subject with a plain start is started") {
    auto m = ModelBuilder("Two", "Two")
                 .subject("A", true)
                 .subject("B", true)
                 .state("A", "A1", StateKind::Do, {rw("x")})
                 .end("A", "A2")
                 .go("A", "a", "A1", "A2")
                 .state("B", "B1", StateKind::Do, {rw("y")})
                 .end("B", "B2")
                 .go("B", "b", "B1", "B2")
                 .build();
    Runtime rt(fifo());
    CHECK(rt.start_instance(compiled(m), "i", "n") == std::vector<std::string>{"A", "B"});
  }
  SUBCASE("no start subject") {
    auto m = passflow::testing::ModelBuilder("R", "R")
                 .subject("A")
                 .subject("B")
                 .exchange("X", "A", "B")
                 .exchange("Y", "B", "A")
                 .state("A", "A1", StateKind::Receive)
                 .state("A", "A2", StateKind::Send)
                 .end("A", "A3")
                 .receive("A", "a1", "A1", "A2", "Y")
                 .send("A", "a2", "A2", "A3", "X")
                 .state("B", "B1", StateKind::Receive)
                 .state("B", "B2", StateKind::Send)
                 .end("B", "B3")
                 .receive("B", "b1", "B1", "B2", "X")
                 .send("B", "b2", "B2", "B3", "Y")
                 .build();
    Runtime rt;
    CHECK(error_code_of([&] { rt.start_instance(compiled(m), "i", "n"); }) == Errc::NoStartSubject);
  }
  SUBCASE("placement on an unknown system") {
    auto m = testing::ModelBuilder("P", "P")
                 .subject("A", true)
                 .state("A", "A1", StateKind::Do, {rw("x")})
                 .end("A", "A2")
                 .go("A", "a", "A1", "A2")
                 .build();
    compile::CompileOptions options;
    options.placement["A"] = "edge";
    Runtime rt;
    auto cm = std::make_shared<const compile::CompiledModel>(compile::compile(m, options));
    CHECK(error_code_of([&] { rt.start_instance(cm, "i", "n"); }) == Errc::PlacementError);
  }
}

TEST_CASE("input pool: early messages are pooled and consumed in send order") {
  Runtime rt(fifo());
  rt.start_instance(compiled(two_orders_model()), "i", "pool");
  auto& sys = rt.system();
  sys.run_until_idle();
  rt.complete(task_for(rt, "S1"), {{"n", 1}}, "ok");
  sys.run_until_idle();
  rt.complete(task_for(rt, "S3"), {{"n", 2}}, "ok");
  sys.run_until_idle();
  // Both orders wait in R's pool while R sits in its task.
  auto* r = actor_of(rt, "i", "R");
  REQUIRE(r != nullptr);
  CHECK(r->current_state() == "R1");
  CHECK(r->pool_size() == 2);
  CHECK(testing::count(rt.trace().events(), "messagePooled", "R") == 2);

  rt.complete(task_for(rt, "R1"), {{"note", "done"}}, "go");
  sys.run_until_idle();
  CHECK_FALSE(rt.active("i"));

  std::vector<std::string> received;
  for (const auto& e : rt.trace().events()) {
    if (e.event == "messageReceived") {
      received.push_back(e.detail["exchange"].get<std::string>() + "#" + e.detail["payload"]["n"].dump() +
                         (e.detail["fromPool"].get<bool>() ? " pool" : ""));
    }
  }
  CHECK(received == std::vector<std::string>{"Order#1 pool", "Order#2 pool"});
  CHECK(testing::project(rt.trace().events(), "R") ==
        std::vector<std::string>{"R stateEntered R1", "R stateEntered R2", "R messageReceived Order",
                                 "R stateEntered R3", "R stateEntered R4", "R messageReceived Order",
                                 "R stateEntered R5", "R actorExited endState R5"});
}

TEST_CASE("input pool holds for every schedule") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Runtime rt({SchedulePolicy::Seeded, seed, 1.0});
    rt.start_instance(compiled(two_orders_model()), "i", "pool");
    auto& sys = rt.system();
    sys.run_until_idle();
    rt.complete(task_for(rt, "S1"), {{"n", 1}}, "ok");
    sys.run_until_idle();
    rt.complete(task_for(rt, "S3"), {{"n", 2}}, "ok");
    sys.run_until_idle();
    rt.complete(task_for(rt, "R1"), {{"note", "x"}}, "go");
    sys.run_until_idle();
    CHECK_FALSE(rt.active("i"));
    std::vector<int> order;
    for (const auto& e : rt.trace().events()) {
      if (e.event == "messageReceived") order.push_back(e.detail["payload"]["n"].get<int>());
    }
    CHECK(order == std::vector<int>{1, 2});
  }
}

TEST_CASE("a message arriving outside a receive state is pooled, not lost") {
  Runtime rt(fifo());
  rt.start_instance(compiled(two_orders_model()), "i", "pool");
  auto& sys = rt.system();
  sys.run_until_idle();
  rt.complete(task_for(rt, "S1"), {{"n", 7}}, "ok");
  sys.run_until_idle();
  auto* r = actor_of(rt, "i", "R");
  REQUIRE(r != nullptr);
  CHECK(r->current_state() == "R1");
  CHECK(r->pool_size() == 1);
  rt.complete(task_for(rt, "R1"), {{"note", "x"}}, "go");
  sys.run_until_idle();
  CHECK(r->current_state() == "R4");
  CHECK(r->pool_size() == 0);
  CHECK(r->store()["n"] == 7);
}

TEST_CASE("out-of-order transition messages are discarded without a state change") {
  Runtime rt(fifo());
  rt.start_instance(compiled(two_orders_model()), "i", "t");
  auto& sys = rt.system();
  sys.run_until_idle();
  auto* s = actor_of(rt, "i", "S");
  REQUIRE(s != nullptr);
  REQUIRE(s->current_state() == "S1");
  auto epoch = s->epoch();
  // A stale epoch, then the current epoch while no transition is pending.
  for (auto e : {epoch - 1, epoch}) {
    sys.post(s->address(), {MessageType::Transition, "i", s->address(), {{"epoch", e}, {"target", "S5"}, {"transition", "forged"}}});
  }
  sys.run_until_idle();
  CHECK(s->current_state() == "S1");
  CHECK(s->epoch() == epoch);
  CHECK(testing::count(rt.trace().events(), "transitionDiscarded", "S") == 2);
  CHECK(testing::count(rt.trace().events(), "stateEntered", "S") == 1);
}

namespace {

pass::PassModel timer_model() {
  return ModelBuilder("Timer", "Timer")
      .subject("A", true)
      .subject("B")
      .exchange("Ping", "A", "B")
      .state("A", "A1", StateKind::Do, {rw("x")})
      .state("A", "A2", StateKind::Send)
      .end("A", "A3")
      .go("A", "a12", "A1", "A2", "ok")
      .send("A", "a23", "A2", "A3", "Ping")
      .state("B", "B1", StateKind::Receive)
      .end("B", "B2")
      .end("B", "B3")
      .receive("B", "b12", "B1", "B2", "Ping")
      .timer("B", "b13", "B1", "B3", "PT1S")
      .build();
}

}  // namespace

TEST_CASE("a pooled message is taken before any timer is armed") {
  // B is created by A's send, so the ping is already pooled when B enters
  // its receive state.
  Runtime rt(fifo());
  rt.start_instance(compiled(timer_model()), "i", "t");
  auto& sys = rt.system();
  sys.run_until_idle();
  rt.complete(task_for(rt, "A1"), {{"x", "1"}}, "ok");
  sys.run_until_idle();
  sys.advance_to(5000);
  sys.run_until_idle();
  CHECK(testing::count(rt.trace().events(), "timerFired") == 0);
  CHECK_FALSE(rt.active("i"));
}

TEST_CASE("stale timer safety: exactly one of timeout and message wins") {
  auto m = ModelBuilder("Stale", "Stale")
               .subject("B", true)
               .subject("A", true)
               .exchange("Ping", "A", "B")
               .state("B", "B1", StateKind::Receive)
               .state("B", "B2", StateKind::Do, {rw("x")})
               .end("B", "B3")
               .end("B", "B4")
               .receive("B", "b12", "B1", "B2", "Ping")
               .timer("B", "b14", "B1", "B4", "PT1S")
               .go("B", "b23", "B2", "B3", "ok")
               .state("A", "A1", StateKind::Do, {rw("x")})
               .state("A", "A2", StateKind::Send)
               .end("A", "A3")
               .go("A", "a12", "A1", "A2", "ok")
               .send("A", "a23", "A2", "A3", "Ping")
               .build();
  SUBCASE("message first, wakeup later is ignored") {
    Runtime rt(fifo());
    rt.start_instance(compiled(m), "i", "t");
    auto& sys = rt.system();
    sys.run_until_idle();
    CHECK(sys.next_timer_due() == 1000);
    rt.complete(task_for(rt, "A1"), {{"x", "1"}}, "ok");
    sys.run_until_idle();
    auto* b = actor_of(rt, "i", "B");
    REQUIRE(b != nullptr);
    CHECK(b->current_state() == "B2");
    sys.advance_to(1000);  // the wakeup is delivered and must be ignored
    sys.run_until_idle();
    CHECK(b->current_state() == "B2");
    CHECK(testing::count(rt.trace().events(), "timerFired") == 0);
  }
  SUBCASE("timeout first, later message is never consumed twice") {
    Runtime rt(fifo());
    rt.start_instance(compiled(m), "i", "t");
    auto& sys = rt.system();
    sys.run_until_idle();
    sys.advance_to(1000);
    sys.run_until_idle();
    CHECK(testing::count(rt.trace().events(), "timerFired", "B") == 1);
    rt.complete(task_for(rt, "A1"), {{"x", "1"}}, "ok");
    sys.run_until_idle();
    CHECK(testing::count(rt.trace().events(), "messageReceived", "B") == 0);
    CHECK(testing::project(rt.trace().events(), "B") ==
          std::vector<std::string>{"B stateEntered B1", "B timerFired b14", "B stateEntered B4",
                                   "B actorExited endState B4"});
  }
}

TEST_CASE("IO actor request, context, completion and cancellation") {
  auto model = owl::read(testing::read_data("owl/customer_companies.owl"));
  Runtime rt(fifo());
  rt.start_instance(compiled(model), "i1", "order 1");
  rt.system().run_until_idle();
  auto pending = rt.pending();
  REQUIRE(pending.size() == 1);
  const auto& task = pending[0];
  CHECK(task.context.instanceName == "order 1");
  CHECK(task.context.modelName == model.componentLabel);
  CHECK(task.context.subjectLabel == "Customer");
  CHECK(task.context.stateLabel == "Prepare order");
  CHECK(task.fields.size() == 3);
  CHECK(rt.pending(std::string("other")).empty());

  SUBCASE("missing required field leaves the task pending") {
    CHECK(error_code_of([&] { rt.complete(task.requestId, Json::object()); }) == Errc::ValidationError);
    CHECK(rt.pending().size() == 1);
  }
  SUBCASE("wrong type and unknown field are rejected") {
    Json values = Json::object();
    for (const auto& f : task.fields) values[f.name] = f.fieldType == FieldType::Integer ? Json("many") : Json("x");
    CHECK(error_code_of([&] { rt.complete(task.requestId, values); }) == Errc::ValidationError);
    Json extra = Json::object();
    extra["bogus"] = 1;
    CHECK(error_code_of([&] { rt.complete(task.requestId, extra); }) == Errc::ValidationError);
  }
  SUBCASE("complete twice") {
    Json values = Json::object();
    for (const auto& f : task.fields) {
      values[f.name] = f.fieldType == FieldType::Integer ? Json(3)
                       : f.fieldType == FieldType::Date  ? Json("2024-02-29")
                                                         : Json("bolts");
    }
    rt.complete(task.requestId, values);
    CHECK(error_code_of([&] { rt.complete(task.requestId, values); }) == Errc::UnknownRequestId);
    rt.system().run_until_idle();
    // The company now holds the check task, with the order data read-only.
    auto next = rt.pending();
    REQUIRE(next.size() == 1);
    CHECK(next[0].context.subjectLabel == "Company");
    CHECK(next[0].choices.size() == 2);
    bool sawValue = false;
    for (const auto& f : next[0].fields) sawValue |= f.value == Json("bolts") || f.value == Json(3);
    CHECK(sawValue);
  }
  SUBCASE("requester exit withdraws the task") {
    rt.stop_instance("i1");
    rt.system().run_until_idle();
    CHECK(rt.pending().empty());
    CHECK(rt.director().registry().entries("i1").empty());
    CHECK_FALSE(rt.active("i1"));
    CHECK(error_code_of([&] { rt.complete(task.requestId, Json::object()); }) == Errc::UnknownRequestId);
  }
  CHECK(valid_date("2024-02-29"));
  CHECK_FALSE(valid_date("2023-02-29"));
  CHECK_FALSE(valid_date("2024-2-9"));
}

TEST_CASE("exit semantics") {
  Runtime rt(fifo());
  rt.start_instance(compiled(parent_child_model()), "i", "family");
  auto& sys = rt.system();
  sys.run_until_idle();
  auto* p = actor_of(rt, "i", "P");
  auto* q = actor_of(rt, "i", "Q");
  REQUIRE(p != nullptr);
  REQUIRE(q != nullptr);
  CHECK(p->children() == std::vector<ActorAddress>{q->address()});
  REQUIRE(rt.pending().size() == 1);
  auto pAddr = p->address(), qAddr = q->address();

  SUBCASE("recursive exit takes the children along and withdraws tasks") {
    sys.post(pAddr, {MessageType::Exit, "i", {}, {{"reason", "admin"}, {"recursive", true}}});
    sys.run_until_idle();
    CHECK_FALSE(sys.alive(pAddr));
    CHECK_FALSE(sys.alive(qAddr));
    CHECK(rt.pending().empty());
    CHECK(rt.director().registry().entries("i").empty());
    CHECK(testing::summarize(rt.trace().events()).back() == "Q actorExited parentExited Q2");
  }
  SUBCASE("non-recursive exit leaves the children running") {
    sys.post(pAddr, {MessageType::Exit, "i", {}, {{"reason", "admin"}, {"recursive", false}}});
    sys.run_until_idle();
    CHECK_FALSE(sys.alive(pAddr));
    CHECK(sys.alive(qAddr));
    CHECK(rt.pending().empty());
    auto entries = rt.director().registry().entries("i");
    CHECK(entries.size() == 1);
    CHECK(entries.count("Q") == 1);
    CHECK(rt.director().registry().exited("i").at("P") == "P2");
  }
  SUBCASE("end state deregisters") {
    rt.complete(rt.pending()[0].requestId, Json::object(), "more");
    sys.run_until_idle();
    CHECK_FALSE(rt.active("i"));
    CHECK(rt.director().registry().entries("i").empty());
    CHECK(rt.director().registry().exited("i").size() == 2);
    auto st = rt.status("i");
    CHECK_FALSE(st.active);
    for (const auto& s : st.subjects) CHECK_FALSE(s.alive);
  }
  SUBCASE("stop exits every actor and refuses late registrations") {
    rt.stop_instance("i");
    sys.run_until_idle();
    CHECK_FALSE(rt.active("i"));
    CHECK(rt.director().registry().closed("i"));
  }
}

TEST_CASE("discovery: the broadcast reaches everyone and C reuses B") {
  Runtime rt(fifo());
  rt.start_instance(compiled(discovery_model()), "i", "d");
  auto& sys = rt.system();
  // Trace position at which A and C first hold B's registered address.
  std::map<std::string, std::size_t> learnedAt;
  while (sys.step()) {
    auto entries = rt.director().registry().entries("i");
    if (!entries.count("B")) continue;
    for (const auto* s : {"A", "C"}) {
      auto* a = actor_of(rt, "i", s);
      if (a && !learnedAt.count(s) && a->addressbook().count("B") && a->addressbook().at("B") == entries.at("B")) {
        learnedAt[s] = rt.trace().events().size();
      }
    }
  }
  CHECK(learnedAt.size() == 2);
  std::size_t cSends = 0;
  for (std::size_t i = 0; i < rt.trace().events().size(); ++i) {
    const auto& e = rt.trace().events()[i];
    if (e.subject == "C" && e.event == "messageSent") cSends = i;
  }
  CHECK(learnedAt["C"] <= cSends);
  CHECK_FALSE(rt.active("i"));
  const auto& events = rt.trace().events();
  CHECK(testing::count(events, "actorSpawned") == 3);  // A by the director, C and B by A
  CHECK(testing::count(events, "duplicateRejected") == 0);
  CHECK(testing::project(events, "C") ==
        std::vector<std::string>{"C stateEntered C1", "C messageReceived ToC", "C stateEntered C2",
                                 "C messageReceived Go", "C stateEntered C3", "C messageSent CtoB->B",
                                 "C stateEntered C4", "C actorExited endState C4"});
  CHECK(testing::project(events, "B") ==
        std::vector<std::string>{"B stateEntered B1", "B messageReceived ToB", "B stateEntered B2",
                                 "B messageSent Ack->A", "B stateEntered B3", "B messageReceived CtoB",
                                 "B stateEntered B4", "B actorExited endState B4"});
}

TEST_CASE("creation race: exactly one B survives under 100 schedules") {
  int contested = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CAPTURE(seed);
    Runtime rt({SchedulePolicy::Seeded, seed, 1.0});
    rt.start_instance(compiled(race_model()), "i", "race");
    rt.system().run_until_idle();
    const auto& events = rt.trace().events();
    std::set<std::string> bActors;
    for (const auto& e : events) {
      if (e.subject == "B" && e.event == "stateEntered") bActors.insert(e.actor);
    }
    CHECK(bActors.size() == 1);
    auto spawnedB = 0;
    for (const auto& e : events) spawnedB += e.event == "actorSpawned" && e.detail["subject"] == "B";
    CHECK(testing::count(events, "duplicateRejected", "B") == static_cast<std::size_t>(spawnedB - 1));
    CHECK(testing::count(events, "messageReceived", "B") == 2);
    CHECK(testing::count(events, "messageDropped") == 0);
    CHECK_FALSE(rt.active("i"));
    CHECK(rt.director().registry().exited("i").at("B") == "B3");
    contested += spawnedB > 1;
  }
  MESSAGE(contested << " of 100 schedules created B twice");
  CHECK(contested > 0);
}
