#include <deque>
#include <set>

#include "passflow/compile.hpp"
#include "passflow/error.hpp"

namespace passflow::compile {

using namespace passflow::pass;

std::string_view to_string(TriggerKind kind) {
  switch (kind) {
    case TriggerKind::Internal: return "internal";
    case TriggerKind::Message: return "message";
    case TriggerKind::UserChoice: return "choice";
  }
  return "?";
}

const CompiledState& BehaviorProgram::state(std::string_view id) const {
  auto it = states.find(std::string(id));
  if (it == states.end()) throw Error(Errc::NotFound, "program '" + subjectId + "' has no state '" + std::string(id) + "'");
  return it->second;
}

namespace {

CompiledState compile_state(const PassModel& model, const SubjectBehavior& b, const State& s) {
  CompiledState out;
  out.id = s.componentId;
  out.label = s.componentLabel;
  out.kind = s.kind;
  out.isEnd = s.isEnd;
  if (s.isEnd) {
    out.onEnter = ExitEffect{};
    return out;
  }

  std::vector<const Transition*> dos;
  for (const auto* t : b.outgoing(s.componentId)) {
    switch (t->kind) {
      case TransitionKind::Do:
        dos.push_back(t);
        break;
      case TransitionKind::Send: {
        const auto& c = std::get<SendCondition>(t->condition);
        const auto* ex = model.exchange(c.messageExchange);
        const auto* spec = ex ? model.specification(ex->messageSpec) : nullptr;
        out.onEnter = SendEffect{c.messageExchange, c.messageSentTo, spec ? spec->payloadFields : std::vector<BusinessField>{}};
        out.triggers.push_back({TriggerKind::Internal, {}, t->targetState, t->componentId});
        break;
      }
      case TransitionKind::Receive: {
        const auto& c = std::get<ReceiveCondition>(t->condition);
        for (const auto& existing : out.triggers) {
          if (existing.kind == TriggerKind::Message && existing.match == c.messageExchange) {
            throw Error(Errc::UnsupportedConstruct,
                        "state '" + s.componentId + "' receives exchange '" + c.messageExchange + "' on two transitions",
                        {s.componentId});
          }
        }
        out.triggers.push_back({TriggerKind::Message, c.messageExchange, t->targetState, t->componentId});
        break;
      }
      case TransitionKind::DayTimeTimer:
        out.timeout = Timeout{std::get<TimerCondition>(t->condition).duration, t->targetState, t->componentId};
        break;
    }
  }

  if (dos.size() == 1 && s.dataFields.empty()) {
    out.triggers.push_back({TriggerKind::Internal, {}, dos[0]->targetState, dos[0]->componentId});
  } else if (!dos.empty()) {
    InteractionEffect interaction{s.dataFields, {}};
    for (const auto* t : dos) {
      const std::string& label = t->choice_label();
      for (const auto& c : interaction.choices) {
        if (c == label) {
          throw Error(Errc::UnsupportedConstruct,
                      "state '" + s.componentId + "' offers the choice '" + label + "' twice", {s.componentId});
        }
      }
      interaction.choices.push_back(label);
      out.triggers.push_back({TriggerKind::UserChoice, label, t->targetState, t->componentId});
    }
    out.onEnter = std::move(interaction);
  }
  return out;
}

}  // namespace

CompiledModel compile(const PassModel& model, const CompileOptions& options) {
  auto report = validate(model);
  if (report.has_errors()) {
    std::vector<std::string> details;
    for (const auto& f : report.findings) {
      if (f.severity == Severity::Error) details.push_back(f.componentId + ": " + f.message);
    }
    throw Error(Errc::CompileError, "model does not validate", std::move(details));
  }

  CompiledModel out;
  for (const auto& e : model.messageExchangeList) {
    const auto* spec = model.specification(e.messageSpec);
    out.catalog.entries[e.componentId] = {e.componentId, spec ? spec->componentLabel : e.componentLabel, e.sender,
                                          e.receiver, spec ? spec->payloadFields : std::vector<BusinessField>{}};
  }

  std::vector<std::string> unreachable;
  for (const auto& subject : model.subjects) {
    const auto& b = model.behaviors.at(subject.componentId);
    BehaviorProgram p;
    p.subjectId = subject.componentId;
    p.subjectLabel = subject.componentLabel;
    p.isStartSubject = subject.isStartSubject;
    p.modelName = model.componentLabel;
    auto placed = options.placement.find(subject.componentId);
    p.targetSystem = placed != options.placement.end() ? placed->second : options.defaultSystem;
    p.initialStateId = b.initialStateId;
    for (const auto& s : b.states) p.states.emplace(s.componentId, compile_state(model, b, s));

    std::set<std::string> seen{p.initialStateId};
    std::deque<std::string> queue{p.initialStateId};
    while (!queue.empty()) {
      const auto& st = p.states.at(queue.front());
      queue.pop_front();
      auto visit = [&](const std::string& target) {
        if (seen.insert(target).second) queue.push_back(target);
      };
      for (const auto& t : st.triggers) visit(t.targetStateId);
      if (st.timeout) visit(st.timeout->targetStateId);
    }
    for (const auto& s : b.states) {
      if (!seen.count(s.componentId)) unreachable.push_back(s.componentId);
    }
    out.programs.emplace(subject.componentId, std::move(p));
  }
  if (!unreachable.empty()) {
    std::string list;
    for (const auto& id : unreachable) list += (list.empty() ? "" : ", ") + id;
    throw Error(Errc::CompileError, "unreachable states: " + list, unreachable);
  }
  return out;
}

}  // namespace passflow::compile
