#include <map>

#include "passflow/error.hpp"
#include "passflow/translate.hpp"

namespace passflow::translate {

using bpmn::NodeKind;
using namespace passflow::pass;

namespace {

std::string label_of(const std::string& name, std::string_view tag, const std::string& id) {
  return name.empty() ? default_label(tag, id) : name;
}

class Translator {
 public:
  explicit Translator(const SimpleBpmnModel& model) : in_(model) {}

  PassModel run() {
    out_.componentId = in_.id;
    out_.componentLabel = label_of(in_.name, "definitions", in_.id);
    out_.messageExchangeListId = in_.collaborationId;

    for (const auto& p : in_.processes) {
      for (const auto& n : p.nodes) owner_[n.node.id] = p.participant.id;
    }

    for (const auto& m : in_.messageFlows) {
      std::string label = label_of(m.name, "messageFlow", m.id);
      auto sender = owner_.find(m.sourceRef);
      auto receiver = owner_.find(m.targetRef);
      if (sender == owner_.end() || receiver == owner_.end()) {
        throw Error(Errc::UnmappableElement, "message flow '" + m.id + "' does not connect flow nodes", {m.id});
      }
      out_.messageSpecifications.push_back({specification_id(m.id), label, {}});
      out_.messageExchangeList.push_back({m.id, label, sender->second, receiver->second, specification_id(m.id)});
    }

    for (const auto& p : in_.processes) process(p);
    return std::move(out_);
  }

 private:
  const bpmn::MessageFlow& single_flow(const SimpleNode& n, const std::vector<std::string>& flows) {
    if (flows.empty()) {
      throw Error(Errc::DanglingMessageFlow, "message event '" + n.node.id + "' has no message flow", {n.node.id});
    }
    if (flows.size() > 1) {
      throw Error(Errc::StructuralError, "message event '" + n.node.id + "' has more than one message flow",
                  {n.node.id});
    }
    return *in_.message_flow(flows.front());
  }

  void process(const SimpleProcess& p) {
    Subject subject{p.participant.id, label_of(p.participant.name, "participant", p.participant.id), false};
    SubjectBehavior b;
    b.componentId = p.processId;
    b.componentLabel = label_of(p.processName, "process", p.processId);
    b.subjectId = p.participant.id;

    for (const auto& n : p.nodes) {
      if (n.afterEventGateway) continue;
      State s;
      s.componentId = n.node.id;
      s.componentLabel = label_of(n.node.name, bpmn::element_name(n.node.kind), n.node.id);
      s.actionId = action_id(n.node.id);
      s.originKind = std::string(bpmn::to_string(n.node.kind));
      switch (n.node.kind) {
        case NodeKind::StartEvent: s.kind = StateKind::Do; s.isInitial = true; break;
        case NodeKind::MessageStartEvent: s.kind = StateKind::Receive; s.isInitial = true; break;
        case NodeKind::EndEvent: s.kind = StateKind::Do; s.isEnd = true; break;
        case NodeKind::Task:
        case NodeKind::ExclusiveGateway:
        case NodeKind::IntermediateCatchTimeEvent: s.kind = StateKind::Do; break;
        case NodeKind::IntermediateThrowMessageEvent: s.kind = StateKind::Send; break;
        case NodeKind::EventBasedGateway:
        case NodeKind::IntermediateCatchMessageEvent: s.kind = StateKind::Receive; break;
      }
      if (s.isInitial) {
        b.initialStateId = s.componentId;
        subject.isStartSubject = n.node.kind == NodeKind::StartEvent;
      }
      b.states.push_back(std::move(s));
    }

    // Flows absorbed into receive/timer transitions of gateway branches.
    std::map<std::string, const bpmn::SequenceFlow*> entry_of;  // catch event id -> gateway flow
    for (const auto& f : p.sequenceFlows) {
      const auto* target = p.node(f.targetRef);
      if (target && target->afterEventGateway) entry_of[target->node.id] = &f;
    }

    for (const auto& f : p.sequenceFlows) {
      const auto* src = p.node(f.sourceRef);
      if (!src) throw Error(Errc::UnmappableElement, "sequence flow '" + f.id + "' has no source", {f.id});
      if (p.node(f.targetRef)->afterEventGateway) continue;

      Transition t;
      t.componentId = f.id;
      t.componentLabel = label_of(f.name, "sequenceFlow", f.id);
      t.sourceState = src->afterEventGateway ? entry_of.at(src->node.id)->sourceRef : src->node.id;
      t.targetState = f.targetRef;
      if (src->afterEventGateway) {
        const auto* entry = entry_of.at(src->node.id);
        t.branch = GatewayBranch{src->node.id, src->node.name, entry->id, entry->name};
      }

      switch (src->node.kind) {
        case NodeKind::IntermediateThrowMessageEvent: {
          const auto& m = single_flow(*src, src->messageFlowsOut);
          t.kind = TransitionKind::Send;
          t.condition = SendCondition{condition_id(f.id), m.id, owner_.at(m.targetRef)};
          break;
        }
        case NodeKind::MessageStartEvent:
        case NodeKind::IntermediateCatchMessageEvent: {
          const auto& m = single_flow(*src, src->messageFlowsIn);
          t.kind = TransitionKind::Receive;
          t.condition = ReceiveCondition{condition_id(f.id), m.id, owner_.at(m.sourceRef)};
          break;
        }
        case NodeKind::IntermediateCatchTimeEvent:
          if (!src->node.timerDuration) {
            throw Error(Errc::UnmappableElement, "timer event '" + src->node.id + "' has no duration", {src->node.id});
          }
          t.kind = TransitionKind::DayTimeTimer;
          t.condition = TimerCondition{condition_id(f.id), *src->node.timerDuration};
          break;
        default:
          t.kind = TransitionKind::Do;
          if (f.condition) t.condition = DoCondition{condition_id(f.id), *f.condition};
          break;
      }
      b.transitions.push_back(std::move(t));
    }

    out_.subjects.push_back(std::move(subject));
    out_.behaviors.emplace(p.participant.id, std::move(b));
  }

  const SimpleBpmnModel& in_;
  PassModel out_;
  std::map<std::string, std::string> owner_;  // node id -> participant id
};

}  // namespace

PassModel translate_to_pass(const SimpleBpmnModel& model) { return Translator(model).run(); }

PassModel translate_to_pass(const bpmn::Definitions& model) { return translate_to_pass(to_simple(model)); }

}  // namespace passflow::translate
