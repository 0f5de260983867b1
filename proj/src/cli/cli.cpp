#include "passflow/cli/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "passflow/bpmn.hpp"
#include "passflow/engine/engine.hpp"
#include "passflow/engine/http.hpp"
#include "passflow/engine/models.hpp"
#include "passflow/engine/scripted.hpp"
#include "passflow/error.hpp"
#include "passflow/owl.hpp"
#include "passflow/translate.hpp"

namespace passflow::cli {

using engine::SourceKind;
using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path, {path});
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::IoError, "cannot write " + path, {path});
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::MalformedXml:
    case Errc::MalformedRdf:
    case Errc::DecodeError:
    case Errc::IoError: return kUsage;
    case Errc::Stalled: return kStalled;
    default: return kInvalid;
  }
}

SourceKind kind_of(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return engine::source_kind_from_string(flag);
  if (auto guess = engine::source_kind_from_path(path)) return *guess;
  throw Error(Errc::IoError, "cannot tell the model kind of " + path + "; pass --from", {path});
}

/// "0.5" or "200/1209600000".
double parse_scale(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return std::stod(text);
    return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw Error(Errc::IoError, "bad time scale '" + text + "'");
  }
}

owl::OwlConfig owl_config(const std::string& baseIri) {
  owl::OwlConfig c;
  if (!baseIri.empty()) {
    c.baseIri = baseIri;
  } else if (const char* env = std::getenv("PASSFLOW_BASE_IRI"); env && *env) {
    c.baseIri = env;
  }
  return c;
}

struct Reporter {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  Json doc = Json::object();

  int finish(int code) {
    if (json) {
      doc["exitCode"] = code;
      out << doc.dump() << '\n';
    }
    return code;
  }

  int fail(const Error& e) {
    if (json) {
      doc["error"] = {{"code", to_string(e.code())}, {"message", e.what()}, {"details", e.details()}};
    } else {
      err << "error: " << e.what() << '\n';
      for (const auto& d : e.details()) err << "  " << d << '\n';
    }
    return finish(exit_code_for(e.code()));
  }

  void findings(const pass::ValidationReport& report) {
    if (json) {
      Json list = Json::array();
      for (const auto& f : report.findings) {
        list.push_back({{"severity", f.severity == pass::Severity::Error ? "error" : "warning"},
                        {"component", f.componentId},
                        {"rule", f.rule},
                        {"message", f.message}});
      }
      doc["findings"] = list;
    } else if (!report.findings.empty()) {
      out << report.to_string();
      if (report.to_string().back() != '\n') out << '\n';
    }
  }
};

volatile std::sig_atomic_t g_interrupted = 0;
engine::HttpService* g_service = nullptr;

void on_signal(int) {
  g_interrupted = 1;
  if (g_service) g_service->stop();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translate, validate and execute subject-oriented process models", "passflow"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  std::string in, from, to, output, baseIri, scriptPath, tracePath, scaleText = "1", policy = "seeded";
  std::string dataDir, host = "127.0.0.1", adminToken, userToken;
  std::uint64_t seed = 0;
  int port = 8080;

  auto* translate = app.add_subcommand("translate", "Convert between BPMN and PASS OWL");
  translate->add_option("input", in, "Source model")->required();
  translate->add_option("--from", from, "bpmn or owl (default: by extension)");
  translate->add_option("--to", to, "bpmn or owl")->required();
  translate->add_option("-o,--output", output, "Target file (default: stdout)");
  translate->add_option("--base-iri", baseIri, "Base IRI for OWL individuals");

  auto* validate = app.add_subcommand("validate", "Check a model and list findings");
  validate->add_option("input", in, "Model file")->required();
  validate->add_option("--from", from, "bpmn or owl (default: by extension)");

  auto* runCmd = app.add_subcommand("run", "Execute a model headless against a script");
  runCmd->add_option("input", in, "Model file")->required();
  runCmd->add_option("--from", from, "bpmn or owl (default: by extension)");
  runCmd->add_option("--script", scriptPath, "Interaction script (JSON)");
  runCmd->add_option("--seed", seed, "Scheduler seed");
  runCmd->add_option("--trace", tracePath, "Trace output, one JSON event per line");
  runCmd->add_option("--time-scale", scaleText, "Timer scale factor, e.g. 0.001 or 200/1209600000");
  runCmd->add_option("--policy", policy, "seeded or fifo")->check(CLI::IsMember({"seeded", "fifo"}));

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Listen port (0 picks one)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--base-iri", baseIri, "Base IRI for OWL individuals");
  serve->add_option("--data-dir", dataDir, "Where uploads and the structured log go");
  serve->add_option("--time-scale", scaleText, "Timer scale factor");
  serve->add_option("--admin-token", adminToken, "Bearer token of the admin role");
  serve->add_option("--user-token", userToken, "Bearer token of the user role");

  auto* dump = app.add_subcommand("dump", "Print the compiled behavior programs");
  dump->add_option("input", in, "Model file")->required();
  dump->add_option("--from", from, "bpmn or owl (default: by extension)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run 'passflow --help' for usage\n";
    return kUsage;
  }

  Reporter report{out, err, json};
  try {
    auto sub = app.get_subcommands().front()->get_name();
    report.doc["command"] = sub;
    engine::LoadOptions load;
    load.owl = owl_config(baseIri);

    if (sub == "translate") {
      auto source = read_file(in);
      auto fromKind = kind_of(from, in);
      auto toKind = engine::source_kind_from_string(to);
      auto model = engine::load_pass(source, fromKind, load);
      auto findings = pass::validate(model);
      report.findings(findings);
      if (findings.has_errors()) return report.finish(kInvalid);
      std::string text = toKind == SourceKind::Owl ? owl::write(model, load.owl)
                                                    : bpmn::serialize(translate::translate_to_bpmn(model));
      if (output.empty()) {
        if (json) {
          report.doc["document"] = text;
        } else {
          out << text;
        }
      } else {
        write_file(output, text);
        report.doc["output"] = output;
      }
      return report.finish(kOk);
    }

    if (sub == "validate") {
      auto model = engine::load_pass(read_file(in), kind_of(from, in), load);
      auto findings = pass::validate(model);
      report.findings(findings);
      if (!findings.has_errors()) compile::compile(model);
      report.doc["valid"] = !findings.has_errors();
      if (!json && !findings.has_errors()) out << "valid\n";
      return report.finish(findings.has_errors() ? kInvalid : kOk);
    }

    if (sub == "dump") {
      auto model = engine::load_pass(read_file(in), kind_of(from, in), load);
      engine::require_valid(model);
      auto text = engine::artifacts_text(compile::compile(model));
      if (json) {
        report.doc["artifacts"] = text;
      } else {
        out << text;
      }
      return report.finish(kOk);
    }

    if (sub == "run") {
      auto model = engine::load_pass(read_file(in), kind_of(from, in), load);
      engine::require_valid(model);
      auto compiled = std::make_shared<const compile::CompiledModel>(compile::compile(model));
      engine::InteractionScript script;
      if (!scriptPath.empty()) script = engine::InteractionScript::parse(read_file(scriptPath));
      engine::RunOptions options;
      options.seed = seed;
      options.timeScale = parse_scale(scaleText);
      options.policy = policy == "fifo" ? runtime::SchedulePolicy::Fifo : runtime::SchedulePolicy::Seeded;
      auto result = engine::run_scripted(compiled, script, options);
      if (!tracePath.empty()) write_file(tracePath, result.trace_jsonl());
      report.doc["outcome"] = to_string(result.outcome);
      report.doc["events"] = result.trace.size();
      report.doc["endTime"] = result.endTime;
      if (result.outcome == engine::RunOutcome::Stalled) {
        report.doc["reason"] = result.reason;
        report.doc["pending"] = Json::parse(result.pending_json().dump());
        if (!json) {
          err << "stalled: " << result.reason << '\n';
          for (const auto& r : result.pending) {
            err << "  task " << r.requestId << ": " << r.context.subjectLabel << " / " << r.context.stateLabel;
            if (!r.choices.empty()) {
              err << " choices:";
              for (const auto& c : r.choices) err << " '" << c << "'";
            }
            err << '\n';
          }
        }
        return report.finish(kStalled);
      }
      if (!json) {
        out << "completed: " << result.trace.size() << " events, virtual time " << result.endTime << " ms\n";
      }
      return report.finish(kOk);
    }

    if (sub == "serve") {
      engine::EngineOptions options;
      options.load = load;
      options.runtime.timeScale = parse_scale(scaleText);
      options.realtime = true;
      if (!dataDir.empty()) options.dataDir = dataDir;
      else options.log = &err;
      engine::Engine eng(options);
      engine::HttpService service(eng, {adminToken, userToken});
      int bound = service.bind(host, port);
      if (bound < 0) throw Error(Errc::IoError, "cannot listen on " + host + ":" + std::to_string(port));
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      out << "listening on http://" << host << ":" << bound << std::endl;
      service.serve();
      g_service = nullptr;
      return kOk;
    }
  } catch (const Error& e) {
    return report.fail(e);
  }
  return kUsage;
}

}  // namespace passflow::cli
