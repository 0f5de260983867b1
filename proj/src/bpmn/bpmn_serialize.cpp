#include "passflow/bpmn.hpp"
#include "passflow/error.hpp"
#include "passflow/xml.hpp"

namespace passflow::bpmn {

namespace {

using Attrs = std::vector<std::pair<std::string, std::string>>;

std::string q(std::string_view local) { return "bpmn:" + std::string(local); }

void add_if(Attrs& attrs, const char* key, const std::string& value) {
  if (!value.empty()) attrs.emplace_back(key, value);
}

void write_node(xml::Writer& w, const FlowNode& n) {
  Attrs attrs{{"id", n.id}};
  add_if(attrs, "name", n.name);
  w.open(q(element_name(n.kind)), attrs);
  for (const auto& f : n.incoming) w.text_element(q("incoming"), {}, f);
  for (const auto& f : n.outgoing) w.text_element(q("outgoing"), {}, f);
  switch (n.kind) {
    case NodeKind::MessageStartEvent:
    case NodeKind::IntermediateThrowMessageEvent:
    case NodeKind::IntermediateCatchMessageEvent:
      w.leaf(q("messageEventDefinition"));
      break;
    case NodeKind::IntermediateCatchTimeEvent:
      w.open(q("timerEventDefinition"));
      w.text_element(q("timeDuration"), {{"xsi:type", "bpmn:tFormalExpression"}}, n.timerDuration->to_iso8601());
      w.close();
      break;
    default:
      break;
  }
  w.close();
}

}  // namespace

std::string serialize(const Definitions& model) {
  check_invariants(model);
  xml::Writer w;
  Attrs root{{"xmlns:bpmn", std::string(kModelNamespace)},
             {"xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance"}};
  add_if(root, "id", model.id);
  add_if(root, "name", model.name);
  root.emplace_back("targetNamespace", "http://passflow.local/bpmn");
  root.emplace_back("exporter", "passflow");
  w.open(q("definitions"), root);

  Attrs collab;
  add_if(collab, "id", model.collaborationId);
  w.open(q("collaboration"), collab);
  for (const auto& p : model.participants) {
    Attrs a{{"id", p.id}};
    add_if(a, "name", p.name);
    a.emplace_back("processRef", p.processRef);
    w.leaf(q("participant"), a);
  }
  for (const auto& mf : model.messageFlows) {
    Attrs a{{"id", mf.id}};
    add_if(a, "name", mf.name);
    a.emplace_back("sourceRef", mf.sourceRef);
    a.emplace_back("targetRef", mf.targetRef);
    w.leaf(q("messageFlow"), a);
  }
  w.close();

  for (const auto& p : model.participants) {
    const Process& proc = model.processes.at(p.id);
    Attrs a{{"id", proc.id}};
    add_if(a, "name", proc.name);
    a.emplace_back("isExecutable", "true");
    w.open(q("process"), a);
    for (const auto& n : proc.flowNodes) write_node(w, n);
    for (const auto& f : proc.sequenceFlows) {
      Attrs fa{{"id", f.id}};
      add_if(fa, "name", f.name);
      fa.emplace_back("sourceRef", f.sourceRef);
      fa.emplace_back("targetRef", f.targetRef);
      if (f.condition) {
        w.open(q("sequenceFlow"), fa);
        w.text_element(q("conditionExpression"), {{"xsi:type", "bpmn:tFormalExpression"}}, *f.condition);
        w.close();
      } else {
        w.leaf(q("sequenceFlow"), fa);
      }
    }
    w.close();
  }
  return w.finish();
}

}  // namespace passflow::bpmn
