#include <algorithm>
#include <set>

#include "passflow/pass.hpp"

namespace passflow::pass {

namespace {

class Validator {
 public:
  explicit Validator(const PassModel& m) : m_(m) {}

  ValidationReport run() {
    if (m_.subjects.empty()) error(m_.componentId, "no-subjects", "a process needs at least one subject");
    check_ids();
    check_sid();
    for (const auto& s : m_.subjects) {
      auto it = m_.behaviors.find(s.componentId);
      if (it == m_.behaviors.end()) {
        error(s.componentId, "missing-behavior", "subject has no behavior");
        continue;
      }
      check_behavior(s, it->second);
    }
    for (const auto& [key, b] : m_.behaviors) {
      if (!m_.subject(key) || b.subjectId != key) {
        error(b.componentId, "orphan-behavior", "behavior is not bound to subject '" + key + "'");
      }
    }
    check_completeness();
    // Every split in an SBD is a set of alternative outgoing transitions of
    // one state; no transition kind expresses AND/OR semantics, so XOR-only
    // branching holds by construction and needs no finding.
    std::sort(report_.findings.begin(), report_.findings.end());
    report_.findings.erase(std::unique(report_.findings.begin(), report_.findings.end()), report_.findings.end());
    return std::move(report_);
  }

 private:
  void error(const std::string& id, std::string rule, std::string message) {
    report_.findings.push_back({Severity::Error, id, std::move(rule), std::move(message)});
  }

  void check_ids() {
    std::multiset<std::string> ids;
    auto add = [&](const std::string& id) {
      if (!id.empty()) ids.insert(id);
    };
    add(m_.componentId);
    add(m_.messageExchangeListId);
    for (const auto& s : m_.subjects) add(s.componentId);
    for (const auto& e : m_.messageExchangeList) add(e.componentId);
    for (const auto& s : m_.messageSpecifications) add(s.componentId);
    for (const auto& [key, b] : m_.behaviors) {
      add(b.componentId);
      for (const auto& s : b.states) {
        add(s.componentId);
        add(s.actionId);
        if (s.componentId.empty()) error(b.componentId, "missing-component-id", "state without componentId");
        if (s.actionId.empty()) error(s.componentId, "missing-action", "state has no action");
      }
      for (const auto& t : b.transitions) {
        add(t.componentId);
        if (t.componentId.empty()) error(b.componentId, "missing-component-id", "transition without componentId");
        std::visit([&](const auto& c) {
          if constexpr (!std::is_same_v<std::decay_t<decltype(c)>, std::monostate>) add(c.componentId);
        }, t.condition);
      }
    }
    for (auto it = ids.begin(); it != ids.end(); it = ids.upper_bound(*it)) {
      if (ids.count(*it) > 1) error(*it, "duplicate-component-id", "componentId is used more than once");
    }
  }

  void check_sid() {
    for (const auto& e : m_.messageExchangeList) {
      if (!m_.subject(e.sender)) error(e.componentId, "exchange-unknown-subject", "unknown sender '" + e.sender + "'");
      if (!m_.subject(e.receiver)) {
        error(e.componentId, "exchange-unknown-subject", "unknown receiver '" + e.receiver + "'");
      }
      if (e.sender == e.receiver) error(e.componentId, "exchange-self", "sender and receiver are the same subject");
      if (!m_.specification(e.messageSpec)) {
        error(e.componentId, "exchange-unknown-spec", "unknown message specification '" + e.messageSpec + "'");
      }
    }
    for (const auto& spec : m_.messageSpecifications) {
      std::set<std::string> names;
      for (const auto& f : spec.payloadFields) {
        if (f.name.empty()) error(spec.componentId, "field-name", "payload field without name");
        if (!names.insert(f.name).second) error(spec.componentId, "duplicate-field", "duplicate field '" + f.name + "'");
      }
    }
  }

  void check_behavior(const Subject& subject, const SubjectBehavior& b) {
    int initial = 0;
    int ends = 0;
    for (const auto& s : b.states) {
      if (s.isInitial) ++initial;
      if (s.isEnd) ++ends;
    }
    if (initial == 0) error(b.componentId, "no-initial-state", "behavior has no initial state");
    if (initial > 1) error(b.componentId, "multiple-initial-states", "multiple initial states");
    const State* init = b.state(b.initialStateId);
    if (!init || !init->isInitial) {
      error(b.componentId, "initial-state-mismatch", "initialStateId does not name the initial state");
    }
    if (ends == 0) error(b.componentId, "no-end-state", "behavior has no end state");

    for (const auto& t : b.transitions) {
      const State* src = b.state(t.sourceState);
      const State* dst = b.state(t.targetState);
      if (!src || !dst) {
        error(t.componentId, "dangling-transition", "source or target state does not exist");
        continue;
      }
      check_transition(subject, *src, t);
    }

    for (const auto& s : b.states) {
      const auto out = b.outgoing(s.componentId);
      if (s.isEnd) {
        if (!out.empty()) error(s.componentId, "end-state-has-transitions", "end state has outgoing transitions");
        continue;
      }
      if (out.empty()) error(s.componentId, "dead-end-state", "non-end state has no outgoing transition");
      int sends = 0;
      int receives = 0;
      int timers = 0;
      for (const auto* t : out) {
        sends += t->kind == TransitionKind::Send;
        receives += t->kind == TransitionKind::Receive;
        timers += t->kind == TransitionKind::DayTimeTimer;
      }
      if (timers > 1) error(s.componentId, "multiple-timers", "state has more than one timer transition");
      if (s.kind == StateKind::Send && sends != 1) {
        error(s.componentId, "send-state-shape", "send state needs exactly one send transition");
      }
      if (s.kind == StateKind::Receive && receives == 0) {
        error(s.componentId, "receive-state-shape", "receive state needs at least one receive transition");
      }
      std::set<std::string> fields;
      for (const auto& f : s.dataFields) {
        if (!fields.insert(f.field.name).second) {
          error(s.componentId, "duplicate-field", "duplicate field '" + f.field.name + "'");
        }
      }
    }
  }

  void check_transition(const Subject& subject, const State& src, const Transition& t) {
    auto mismatch = [&](const std::string& what) { error(t.componentId, "transition-kind-mismatch", what); };
    switch (t.kind) {
      case TransitionKind::Do:
        if (src.kind != StateKind::Do) mismatch("do-transition leaves a non-do state");
        if (!std::holds_alternative<std::monostate>(t.condition) && !std::holds_alternative<DoCondition>(t.condition)) {
          error(t.componentId, "condition-mismatch", "do-transition carries a foreign condition");
        }
        break;
      case TransitionKind::Send: {
        if (src.kind != StateKind::Send) mismatch("send-transition leaves a non-send state");
        const auto* c = std::get_if<SendCondition>(&t.condition);
        if (!c) {
          error(t.componentId, "condition-mismatch", "send-transition needs a send-transition condition");
          break;
        }
        const auto* ex = m_.exchange(c->messageExchange);
        if (!ex) {
          error(t.componentId, "unknown-exchange", "references exchange '" + c->messageExchange + "' absent from the list");
          break;
        }
        if (ex->sender != subject.componentId || ex->receiver != c->messageSentTo) {
          error(t.componentId, "exchange-direction", "send does not match sender/receiver of '" + ex->componentId + "'");
        }
        break;
      }
      case TransitionKind::Receive: {
        if (src.kind != StateKind::Receive) mismatch("receive-transition leaves a non-receive state");
        const auto* c = std::get_if<ReceiveCondition>(&t.condition);
        if (!c) {
          error(t.componentId, "condition-mismatch", "receive-transition needs a receive-transition condition");
          break;
        }
        const auto* ex = m_.exchange(c->messageExchange);
        if (!ex) {
          error(t.componentId, "unknown-exchange", "references exchange '" + c->messageExchange + "' absent from the list");
          break;
        }
        if (ex->receiver != subject.componentId || ex->sender != c->messageSentFrom) {
          error(t.componentId, "exchange-direction",
                "receive does not match sender/receiver of '" + ex->componentId + "'");
        }
        break;
      }
      case TransitionKind::DayTimeTimer: {
        const auto* c = std::get_if<TimerCondition>(&t.condition);
        if (!c) {
          error(t.componentId, "condition-mismatch", "timer transition needs a duration condition");
        } else if (c->duration.value().count() <= 0) {
          error(t.componentId, "timer-duration", "timer duration must be positive");
        }
        break;
      }
    }
  }

  void check_completeness() {
    for (const auto& e : m_.messageExchangeList) {
      bool sent = false;
      bool received = false;
      if (auto it = m_.behaviors.find(e.sender); it != m_.behaviors.end()) {
        for (const auto& t : it->second.transitions) {
          const auto* c = std::get_if<SendCondition>(&t.condition);
          sent |= t.kind == TransitionKind::Send && c && c->messageExchange == e.componentId;
        }
      }
      if (auto it = m_.behaviors.find(e.receiver); it != m_.behaviors.end()) {
        for (const auto& t : it->second.transitions) {
          const auto* c = std::get_if<ReceiveCondition>(&t.condition);
          received |= t.kind == TransitionKind::Receive && c && c->messageExchange == e.componentId;
        }
      }
      if (!sent) error(e.componentId, "unhandled-exchange", "unhandled exchange: sender behavior never sends it");
      if (!received) {
        error(e.componentId, "unhandled-exchange", "unhandled exchange: receiver behavior never receives it");
      }
    }
  }

  const PassModel& m_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const PassModel& model) { return Validator(model).run(); }

}  // namespace passflow::pass
