#include <cctype>
#include <cstdio>
#include <sstream>

#include "passflow/compile.hpp"
#include "passflow/error.hpp"

namespace passflow::compile {

using namespace passflow::pass;

namespace {

constexpr std::string_view kProgramHeader = "passflow-program 1";
constexpr std::string_view kCatalogHeader = "passflow-catalog 1";

// Tokens are space separated; "-" stands for the empty string.
std::string enc(std::string_view text) {
  if (text.empty()) return "-";
  std::string out;
  for (unsigned char c : text) {
    if (c <= 0x20 || c == '%' || c == 0x7f || (c == '-' && text.size() == 1)) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(Errc::DecodeError, "line " + std::to_string(line) + ": " + what);
}

class Lines {
 public:
  explicit Lines(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string_view::npos) fail(static_cast<int>(lines_.size()) + 1, "missing final newline");
      lines_.emplace_back(text.substr(start, nl - start));
      start = nl + 1;
    }
  }

  std::vector<std::string> next(std::string_view keyword, std::size_t arity) {
    if (pos_ >= lines_.size()) fail(static_cast<int>(pos_) + 1, "truncated before '" + std::string(keyword) + "'");
    std::vector<std::string> tokens;
    std::istringstream in(lines_[pos_]);
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    ++pos_;
    if (tokens.empty() || tokens[0] != keyword) fail(line(), "expected '" + std::string(keyword) + "'");
    if (tokens.size() != arity + 1) fail(line(), "'" + std::string(keyword) + "' takes " + std::to_string(arity) + " values");
    tokens.erase(tokens.begin());
    for (auto& t : tokens) t = dec(t);
    return tokens;
  }

  /// First token of the next line.
  std::string peek() {
    if (pos_ >= lines_.size()) fail(static_cast<int>(pos_) + 1, "truncated");
    const std::string& l = lines_[pos_];
    return l.substr(0, l.find(' '));
  }

  void header(std::string_view expected) {
    if (lines_.empty() || lines_[0] != expected) fail(1, "expected header '" + std::string(expected) + "'");
    pos_ = 1;
  }

  void finish() {
    next("end", 0);
    if (pos_ != lines_.size()) fail(line() + 1, "trailing content after 'end'");
  }

  std::size_t count(std::string_view keyword) {
    auto v = next(keyword, 1);
    return number(v[0]);
  }

  std::size_t number(const std::string& text) {
    if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos) {
      fail(line(), "bad count '" + text + "'");
    }
    return std::stoul(text);
  }

  bool flag(const std::string& text) {
    if (text != "0" && text != "1") fail(line(), "bad flag '" + text + "'");
    return text == "1";
  }

  int line() const { return static_cast<int>(pos_); }

 private:
  std::string dec(const std::string& tok) {
    if (tok == "-") return {};
    std::string out;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] != '%') {
        out += tok[i];
        continue;
      }
      if (i + 2 >= tok.size() || !std::isxdigit(static_cast<unsigned char>(tok[i + 1])) ||
          !std::isxdigit(static_cast<unsigned char>(tok[i + 2]))) {
        fail(line(), "bad escape in '" + tok + "'");
      }
      out += static_cast<char>(std::stoi(tok.substr(i + 1, 2), nullptr, 16));
      i += 2;
    }
    return out;
  }

  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

std::string field_line(const BusinessField& f) {
  return "field " + enc(f.name) + " " + enc(f.displayName) + " " + std::string(to_string(f.fieldType));
}

BusinessField read_field(Lines& in, std::vector<std::string> v) {
  auto type = field_type_from_string(v[2]);
  if (!type) fail(in.line(), "unknown field type '" + v[2] + "'");
  return {v[0], v[1], *type};
}

StateKind state_kind(Lines& in, const std::string& text) {
  if (text == "Do") return StateKind::Do;
  if (text == "Send") return StateKind::Send;
  if (text == "Receive") return StateKind::Receive;
  fail(in.line(), "unknown state kind '" + text + "'");
}

TriggerKind trigger_kind(Lines& in, const std::string& text) {
  if (text == "internal") return TriggerKind::Internal;
  if (text == "message") return TriggerKind::Message;
  if (text == "choice") return TriggerKind::UserChoice;
  fail(in.line(), "unknown trigger kind '" + text + "'");
}

}  // namespace

std::string serialize(const BehaviorProgram& p) {
  std::ostringstream out;
  out << kProgramHeader << '\n';
  out << "subject " << enc(p.subjectId) << ' ' << enc(p.subjectLabel) << ' ' << (p.isStartSubject ? 1 : 0) << '\n';
  out << "model " << enc(p.modelName) << '\n';
  out << "system " << enc(p.targetSystem) << '\n';
  out << "initial " << enc(p.initialStateId) << '\n';
  out << "states " << p.states.size() << '\n';
  for (const auto& [id, s] : p.states) {
    out << "state " << enc(s.id) << ' ' << enc(s.label) << ' ' << to_string(s.kind) << ' ' << (s.isEnd ? 1 : 0) << '\n';
    if (const auto* i = std::get_if<InteractionEffect>(&s.onEnter)) {
      out << "interaction " << i->fields.size() << ' ' << i->choices.size() << '\n';
      for (const auto& f : i->fields) out << field_line(f.field) << ' ' << (f.readOnly ? "ro" : "rw") << '\n';
      for (const auto& c : i->choices) out << "choice " << enc(c) << '\n';
    } else if (const auto* snd = std::get_if<SendEffect>(&s.onEnter)) {
      out << "send " << enc(snd->exchangeId) << ' ' << enc(snd->recipient) << ' ' << snd->payloadTemplate.size() << '\n';
      for (const auto& f : snd->payloadTemplate) out << field_line(f) << '\n';
    } else if (std::holds_alternative<ExitEffect>(s.onEnter)) {
      out << "exit\n";
    } else {
      out << "none\n";
    }
    out << "triggers " << s.triggers.size() << '\n';
    for (const auto& t : s.triggers) {
      out << "trigger " << to_string(t.kind) << ' ' << enc(t.match) << ' ' << enc(t.targetStateId) << ' '
          << enc(t.transitionId) << '\n';
    }
    if (s.timeout) {
      out << "timeout " << s.timeout->duration.to_iso8601() << ' ' << enc(s.timeout->targetStateId) << ' '
          << enc(s.timeout->transitionId) << '\n';
    } else {
      out << "notimeout\n";
    }
  }
  out << "end\n";
  return out.str();
}

BehaviorProgram deserialize_program(std::string_view text) {
  Lines in(text);
  in.header(kProgramHeader);
  BehaviorProgram p;
  auto subject = in.next("subject", 3);
  p.subjectId = subject[0];
  p.subjectLabel = subject[1];
  p.isStartSubject = in.flag(subject[2]);
  p.modelName = in.next("model", 1)[0];
  p.targetSystem = in.next("system", 1)[0];
  p.initialStateId = in.next("initial", 1)[0];
  std::size_t n = in.count("states");
  for (std::size_t k = 0; k < n; ++k) {
    auto v = in.next("state", 4);
    CompiledState s;
    s.id = v[0];
    s.label = v[1];
    s.kind = state_kind(in, v[2]);
    s.isEnd = in.flag(v[3]);
    std::string effect = in.peek();
    if (effect == "interaction") {
      auto e = in.next(effect, 2);
      InteractionEffect i;
      std::size_t nf = in.number(e[0]), nc = in.number(e[1]);
      for (std::size_t f = 0; f < nf; ++f) {
        auto fv = in.next("field", 4);
        if (fv[3] != "ro" && fv[3] != "rw") fail(in.line(), "bad access '" + fv[3] + "'");
        i.fields.push_back({read_field(in, fv), fv[3] == "ro"});
      }
      for (std::size_t c = 0; c < nc; ++c) i.choices.push_back(in.next("choice", 1)[0]);
      s.onEnter = std::move(i);
    } else if (effect == "send") {
      auto e = in.next(effect, 3);
      SendEffect snd{e[0], e[1], {}};
      std::size_t nf = in.number(e[2]);
      for (std::size_t f = 0; f < nf; ++f) snd.payloadTemplate.push_back(read_field(in, in.next("field", 3)));
      s.onEnter = std::move(snd);
    } else if (effect == "exit") {
      in.next(effect, 0);
      s.onEnter = ExitEffect{};
    } else {
      in.next("none", 0);
    }
    std::size_t nt = in.count("triggers");
    for (std::size_t t = 0; t < nt; ++t) {
      auto tv = in.next("trigger", 4);
      s.triggers.push_back({trigger_kind(in, tv[0]), tv[1], tv[2], tv[3]});
    }
    if (in.peek() == "notimeout") {
      in.next("notimeout", 0);
    } else {
      auto tv = in.next("timeout", 3);
      auto d = Duration::parse(tv[0]);
      if (!d) fail(in.line(), "bad duration '" + tv[0] + "'");
      s.timeout = Timeout{*d, tv[1], tv[2]};
    }
    if (!p.states.emplace(s.id, s).second) fail(in.line(), "duplicate state '" + s.id + "'");
  }
  in.finish();
  if (!p.states.count(p.initialStateId)) throw Error(Errc::DecodeError, "initial state '" + p.initialStateId + "' missing");
  for (const auto& [id, s] : p.states) {
    for (const auto& t : s.triggers) {
      if (!p.states.count(t.targetStateId)) throw Error(Errc::DecodeError, "unknown target '" + t.targetStateId + "'");
    }
    if (s.timeout && !p.states.count(s.timeout->targetStateId)) {
      throw Error(Errc::DecodeError, "unknown target '" + s.timeout->targetStateId + "'");
    }
  }
  return p;
}

std::string serialize(const MessageCatalog& catalog) {
  std::ostringstream out;
  out << kCatalogHeader << '\n';
  out << "entries " << catalog.entries.size() << '\n';
  for (const auto& [id, e] : catalog.entries) {
    out << "entry " << enc(e.exchangeId) << ' ' << enc(e.specLabel) << ' ' << enc(e.sender) << ' ' << enc(e.receiver)
        << ' ' << e.payloadFields.size() << '\n';
    for (const auto& f : e.payloadFields) out << field_line(f) << '\n';
  }
  out << "end\n";
  return out.str();
}

MessageCatalog deserialize_catalog(std::string_view text) {
  Lines in(text);
  in.header(kCatalogHeader);
  MessageCatalog c;
  std::size_t n = in.count("entries");
  for (std::size_t k = 0; k < n; ++k) {
    auto v = in.next("entry", 5);
    CatalogEntry e{v[0], v[1], v[2], v[3], {}};
    std::size_t nf = in.number(v[4]);
    for (std::size_t f = 0; f < nf; ++f) e.payloadFields.push_back(read_field(in, in.next("field", 3)));
    if (!c.entries.emplace(e.exchangeId, e).second) fail(in.line(), "duplicate entry '" + e.exchangeId + "'");
  }
  in.finish();
  return c;
}

}  // namespace passflow::compile
