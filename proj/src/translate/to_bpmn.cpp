#include <map>
#include <set>

#include "passflow/error.hpp"
#include "passflow/translate.hpp"

namespace passflow::translate {

using bpmn::NodeKind;
using namespace passflow::pass;

namespace {

[[noreturn]] void untranslatable(const std::string& id, const std::string& what) {
  throw Error(Errc::Untranslatable, "'" + id + "': " + what, {id});
}

StateKind state_kind_for(NodeKind kind) {
  switch (kind) {
    case NodeKind::MessageStartEvent:
    case NodeKind::EventBasedGateway:
    case NodeKind::IntermediateCatchMessageEvent: return StateKind::Receive;
    case NodeKind::IntermediateThrowMessageEvent: return StateKind::Send;
    default: return StateKind::Do;
  }
}

class BackTranslator {
 public:
  explicit BackTranslator(const PassModel& model) : in_(model) {}

  bpmn::Definitions run() {
    collect_ids();
    out_.id = in_.componentId;
    out_.name = name_from_label(in_.componentLabel, "definitions", in_.componentId);
    out_.collaborationId = in_.messageExchangeListId.empty() ? fresh(in_.componentId + "_collaboration")
                                                             : in_.messageExchangeListId;

    for (const auto& s : in_.subjects) {
      auto it = in_.behaviors.find(s.componentId);
      if (it == in_.behaviors.end()) untranslatable(s.componentId, "subject has no behavior");
      const auto& b = it->second;
      out_.participants.push_back({s.componentId, name_from_label(s.componentLabel, "participant", s.componentId),
                                   b.componentId});
      out_.processes.emplace(s.componentId, behavior(b));
    }
    message_flows();

    for (auto& [pid, process] : out_.processes) {
      for (auto& n : process.flowNodes) {
        n.incoming.clear();
        n.outgoing.clear();
        for (const auto& f : process.sequenceFlows) {
          if (f.targetRef == n.id) n.incoming.push_back(f.id);
          if (f.sourceRef == n.id) n.outgoing.push_back(f.id);
        }
      }
    }
    try {
      bpmn::check_invariants(out_);
    } catch (const Error& e) {
      throw Error(Errc::Untranslatable, e.what(), e.details());
    }
    return std::move(out_);
  }

 private:
  void collect_ids() {
    used_.insert(in_.componentId);
    used_.insert(in_.messageExchangeListId);
    for (const auto& s : in_.subjects) used_.insert(s.componentId);
    for (const auto& e : in_.messageExchangeList) used_.insert(e.componentId);
    for (const auto& [sid, b] : in_.behaviors) {
      used_.insert(b.componentId);
      for (const auto& s : b.states) used_.insert(s.componentId);
      for (const auto& t : b.transitions) {
        used_.insert(t.componentId);
        if (t.branch) {
          used_.insert(t.branch->eventId);
          used_.insert(t.branch->entryFlowId);
        }
      }
    }
  }

  std::string fresh(const std::string& wanted) {
    std::string id = wanted;
    for (int k = 2; used_.count(id) > 0; ++k) id = wanted + "_" + std::to_string(k);
    used_.insert(id);
    return id;
  }

  NodeKind node_kind(const SubjectBehavior& b, const State& s) {
    auto outgoing = b.outgoing(s.componentId);
    if (!s.originKind.empty()) {
      auto kind = bpmn::node_kind_from_string(s.originKind);
      if (kind && state_kind_for(*kind) == s.kind) return *kind;
    }
    int dos = 0, timers = 0, receives = 0;
    bool branched = false;
    for (const auto* t : outgoing) {
      dos += t->kind == TransitionKind::Do;
      timers += t->kind == TransitionKind::DayTimeTimer;
      receives += t->kind == TransitionKind::Receive;
      branched |= t->branch.has_value();
    }
    switch (s.kind) {
      case StateKind::Send:
        if (s.isInitial) untranslatable(s.componentId, "initial send state has no BPMN counterpart");
        if (timers > 0) untranslatable(s.componentId, "send state with a timeout");
        return NodeKind::IntermediateThrowMessageEvent;
      case StateKind::Receive:
        if (s.isInitial) {
          if (outgoing.size() != 1 || branched) {
            untranslatable(s.componentId, "initial receive state must have exactly one receive transition");
          }
          return NodeKind::MessageStartEvent;
        }
        if (outgoing.size() > 1 || branched) return NodeKind::EventBasedGateway;
        return NodeKind::IntermediateCatchMessageEvent;
      case StateKind::Do:
        if (s.isInitial) {
          if (timers > 0) untranslatable(s.componentId, "initial state with a timeout");
          return NodeKind::StartEvent;
        }
        if (s.isEnd) return NodeKind::EndEvent;
        if (timers > 0) {
          if (dos > 0) untranslatable(s.componentId, "do state mixing a timeout with do-transitions");
          return NodeKind::IntermediateCatchTimeEvent;
        }
        return dos >= 2 ? NodeKind::ExclusiveGateway : NodeKind::Task;
    }
    return NodeKind::Task;
  }

  bpmn::Process behavior(const SubjectBehavior& b) {
    bpmn::Process p;
    p.id = b.componentId;
    p.name = name_from_label(b.componentLabel, "process", b.componentId);

    std::map<std::string, NodeKind> kinds;
    for (const auto& s : b.states) {
      NodeKind kind = node_kind(b, s);
      kinds[s.componentId] = kind;
      bpmn::FlowNode n;
      n.id = s.componentId;
      n.kind = kind;
      n.name = name_from_label(s.componentLabel, bpmn::element_name(kind), s.componentId);
      if (kind == NodeKind::IntermediateCatchTimeEvent) {
        for (const auto* t : b.outgoing(s.componentId)) {
          if (const auto* c = std::get_if<TimerCondition>(&t->condition)) n.timerDuration = c->duration;
        }
      }
      p.flowNodes.push_back(std::move(n));
    }

    std::map<std::string, int> branch_count;
    for (const auto& t : b.transitions) {
      auto sk = kinds.find(t.sourceState);
      if (sk == kinds.end()) untranslatable(t.componentId, "transition leaves an unknown state");
      std::string name = name_from_label(t.componentLabel, "sequenceFlow", t.componentId);

      if (sk->second == NodeKind::EventBasedGateway) {
        if (t.kind != TransitionKind::Receive && t.kind != TransitionKind::DayTimeTimer) {
          untranslatable(t.componentId, "event-based branch must be a receive or timer transition");
        }
        int k = ++branch_count[t.sourceState];
        GatewayBranch branch = t.branch ? *t.branch
                                        : GatewayBranch{fresh(t.sourceState + "_event_" + std::to_string(k)), name,
                                                        fresh(t.sourceState + "_branch_" + std::to_string(k)), {}};
        bpmn::FlowNode event;
        event.id = branch.eventId;
        event.name = branch.eventLabel;
        if (t.kind == TransitionKind::Receive) {
          event.kind = NodeKind::IntermediateCatchMessageEvent;
        } else {
          event.kind = NodeKind::IntermediateCatchTimeEvent;
          event.timerDuration = std::get<TimerCondition>(t.condition).duration;
        }
        p.flowNodes.push_back(std::move(event));
        p.sequenceFlows.push_back({branch.entryFlowId, branch.entryFlowLabel, t.sourceState, branch.eventId, {}});
        p.sequenceFlows.push_back({t.componentId, name, branch.eventId, t.targetState, {}});
        if (const auto* c = std::get_if<ReceiveCondition>(&t.condition)) receivers_[c->messageExchange].push_back(branch.eventId);
        continue;
      }

      bpmn::SequenceFlow f{t.componentId, name, t.sourceState, t.targetState, {}};
      if (const auto* c = std::get_if<DoCondition>(&t.condition); c && !c->label.empty()) f.condition = c->label;
      if (const auto* c = std::get_if<SendCondition>(&t.condition)) senders_[c->messageExchange].push_back(t.sourceState);
      if (const auto* c = std::get_if<ReceiveCondition>(&t.condition)) receivers_[c->messageExchange].push_back(t.sourceState);
      p.sequenceFlows.push_back(std::move(f));
    }
    return p;
  }

  void message_flows() {
    for (const auto& e : in_.messageExchangeList) {
      const auto& senders = senders_[e.componentId];
      const auto& receivers = receivers_[e.componentId];
      if (senders.size() != 1 || receivers.size() != 1) {
        untranslatable(e.componentId, "exchange needs exactly one send and one receive transition to become a message flow");
      }
      out_.messageFlows.push_back(
          {e.componentId, name_from_label(e.componentLabel, "messageFlow", e.componentId), senders[0], receivers[0]});
    }
  }

  const PassModel& in_;
  bpmn::Definitions out_;
  std::set<std::string> used_;
  std::map<std::string, std::vector<std::string>> senders_;    // exchange -> throw node ids
  std::map<std::string, std::vector<std::string>> receivers_;  // exchange -> catch node ids
};

}  // namespace

bpmn::Definitions translate_to_bpmn(const PassModel& model) { return BackTranslator(model).run(); }

}  // namespace passflow::translate
