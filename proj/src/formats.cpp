#include "tracematch/formats.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace tracematch {

std::string to_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

std::string from_hex(const std::string& hex, std::size_t line_no) {
  if (hex.size() % 2 != 0) throw ParseError(line_no, "odd hex payload length");
  auto nibble = [&](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    throw ParseError(line_no, "bad hex digit in payload");
  };
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2)
    out.push_back(static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_uint(const std::string& s, std::size_t line_no,
                         const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line_no, "bad unsigned value for " + what + ": '" + s + "'");
  return std::stoull(s);
}

// Expects "key=value"; returns value.
std::string expect_field(const std::string& tok, const std::string& key,
                         std::size_t line_no) {
  const std::string prefix = key + "=";
  if (tok.rfind(prefix, 0) != 0)
    throw ParseError(line_no, "expected field '" + key + "', got '" + tok + "'");
  return tok.substr(prefix.size());
}

}  // namespace

TraceRecord parse_record_line(const std::string& line, std::size_t line_no) {
  auto toks = split(line, ' ');
  if (toks.empty() || toks[0] != "EVT")
    throw ParseError(line_no, "expected EVT record");
  if (toks.size() < 6) throw ParseError(line_no, "truncated EVT record");

  TraceRecord rec;
  rec.id = static_cast<EventId>(parse_uint(expect_field(toks[1], "id", line_no),
                                           line_no, "id"));
  const std::string side = expect_field(toks[2], "side", line_no);
  if (side != "S" && side != "I") throw ParseError(line_no, "side must be S or I");
  rec.side = side[0];
  rec.t = parse_uint(expect_field(toks[3], "t", line_no), line_no, "t");
  rec.label = expect_field(toks[4], "label", line_no);
  if (rec.label.empty()) throw ParseError(line_no, "empty label");
  rec.port = static_cast<PortId>(
      parse_uint(expect_field(toks[5], "port", line_no), line_no, "port"));

  std::size_t i = 6;
  if (i < toks.size() && toks[i].rfind("payload=", 0) == 0) {
    rec.payload = from_hex(toks[i].substr(8), line_no);
    if (rec.payload.empty()) throw ParseError(line_no, "empty payload field");
    ++i;
  }
  if (i < toks.size() && toks[i].rfind("opt=", 0) == 0) {
    if (toks[i] != "opt=1") throw ParseError(line_no, "opt field must be opt=1");
    rec.opt = true;
    ++i;
  }
  if (i < toks.size() && toks[i].rfind("deps=", 0) == 0) {
    for (const auto& d : split(toks[i].substr(5), ','))
      rec.deps.push_back(
          static_cast<EventId>(parse_uint(d, line_no, "deps entry")));
    ++i;
  }
  if (i != toks.size()) throw ParseError(line_no, "trailing tokens in record");
  return rec;
}

std::string serialize_record(const TraceRecord& rec) {
  std::ostringstream os;
  os << "EVT id=" << rec.id << " side=" << rec.side << " t=" << rec.t
     << " label=" << rec.label << " port=" << rec.port;
  if (!rec.payload.empty()) os << " payload=" << to_hex(rec.payload);
  if (rec.opt) os << " opt=1";
  if (!rec.deps.empty()) {
    os << " deps=";
    for (std::size_t i = 0; i < rec.deps.size(); ++i) {
      if (i) os << ',';
      os << rec.deps[i];
    }
  }
  return os.str();
}

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  std::optional<Tick> last_t;
  std::set<std::pair<char, EventId>> ids;
  std::set<EventId> spec_seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    TraceRecord rec = parse_record_line(line, line_no);
    if (last_t && rec.t < *last_t)
      throw ParseError(line_no, "records must be sorted by t");
    last_t = rec.t;
    if (!ids.insert({rec.side, rec.id}).second)
      throw ParseError(line_no, "duplicate id " + std::to_string(rec.id) +
                                    " on side " + std::string(1, rec.side));
    if (rec.side == 'I' && (rec.opt || !rec.deps.empty()))
      throw ParseError(line_no, "opt/deps are specification-side fields");
    for (EventId d : rec.deps)
      if (!spec_seen.count(d))
        throw ParseError(line_no,
                         "deps must reference earlier spec ids, got " +
                             std::to_string(d));
    if (rec.side == 'S') spec_seen.insert(rec.id);
    out.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_trace(const std::vector<TraceRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    out += serialize_record(rec);
    out += '\n';
  }
  return out;
}

SideTraces split_sides(const std::vector<TraceRecord>& records) {
  SideTraces st;
  std::map<EventId, EventId> spec_pos;  // record id -> word position
  for (const auto& rec : records) {
    if (!st.ports.has(rec.label)) {
      st.ports.assign(rec.label, rec.port);
    } else if (st.ports.port_of(rec.label) != rec.port) {
      throw ParseError(0, "label " + rec.label + " appears on two ports");
    }
    if (rec.side == 'S') {
      const auto pos =
          static_cast<EventId>(st.spec_word.push(EventLabel{rec.label, rec.payload},
                                                 rec.t));
      st.spec_file_ids.push_back(rec.id);
      spec_pos[rec.id] = pos;
      if (rec.opt) st.optional_ids.insert(pos);
      for (EventId d : rec.deps) st.deps.edges.emplace_back(spec_pos.at(d), pos);
    } else {
      st.impl_word.push(EventLabel{rec.label, rec.payload}, rec.t);
      st.impl_file_ids.push_back(rec.id);
    }
  }
  return st;
}

std::vector<TraceRecord> spec_records(const TimedWord& word,
                                      const DependencyDecl& deps,
                                      const std::set<EventId>& optional_ids,
                                      const PortAssignment& ports) {
  std::vector<TraceRecord> out;
  for (const auto& e : word.events()) {
    TraceRecord rec;
    rec.id = e.seq;
    rec.side = 'S';
    rec.t = e.tick;
    rec.label = e.label.name;
    rec.port = ports.has(e.label.name) ? ports.port_of(e.label.name) : 0;
    rec.payload = e.label.payload;
    rec.opt = optional_ids.count(e.seq) != 0;
    for (auto [from, to] : deps.edges)
      if (to == e.seq) rec.deps.push_back(from);
    std::sort(rec.deps.begin(), rec.deps.end());
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<TraceRecord> impl_records(const TimedWord& word,
                                      const PortAssignment& ports) {
  std::vector<TraceRecord> out;
  for (const auto& e : word.events()) {
    TraceRecord rec;
    rec.id = e.seq;
    rec.side = 'I';
    rec.t = e.tick;
    rec.label = e.label.name;
    rec.port = ports.has(e.label.name) ? ports.port_of(e.label.name) : 0;
    rec.payload = e.label.payload;
    out.push_back(std::move(rec));
  }
  return out;
}

FileConfig parse_config(std::istream& in) {
  FileConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  bool have_dtminus = false, have_dtplus = false;
  bool have_bminus = false, have_bplus = false;
  std::vector<std::pair<std::string, std::string>> independents;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    auto& slack = cfg.monitor.slack;

    if (key == "dtminus.default") {
      slack.dt_minus_default = parse_uint(value, line_no, key);
      have_dtminus = true;
    } else if (key == "dtplus.default") {
      slack.dt_plus_default = parse_uint(value, line_no, key);
      have_dtplus = true;
    } else if (key.rfind("dtminus.", 0) == 0) {
      slack.dt_minus[key.substr(8)] = parse_uint(value, line_no, key);
    } else if (key.rfind("dtplus.", 0) == 0) {
      slack.dt_plus[key.substr(7)] = parse_uint(value, line_no, key);
    } else if (key == "bound.minus") {
      slack.bound_minus = parse_uint(value, line_no, key);
      have_bminus = true;
    } else if (key == "bound.plus") {
      slack.bound_plus = parse_uint(value, line_no, key);
      have_bplus = true;
    } else if (key == "ddep") {
      cfg.monitor.dep_window = parse_uint(value, line_no, key);
    } else if (key == "mode") {
      if (value == "plain")
        cfg.monitor.optional_mode = false;
      else if (value == "optional")
        cfg.monitor.optional_mode = true;
      else
        throw ParseError(line_no, "mode must be plain or optional");
    } else if (key == "term") {
      if (value == "explicit")
        cfg.monitor.termination.mode = TerminationPolicy::Mode::Explicit;
      else if (value == "convergent")
        cfg.monitor.termination.mode = TerminationPolicy::Mode::Convergent;
      else
        throw ParseError(line_no, "term must be explicit or convergent");
    } else if (key == "stabilization.window") {
      cfg.monitor.termination.stabilization_window =
          parse_uint(value, line_no, key);
    } else if (key == "independent") {
      auto parts = split(value, ':');
      if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
        throw ParseError(line_no, "independent takes label:label");
      independents.emplace_back(parts[0], parts[1]);
    } else if (key.rfind("ports.", 0) == 0) {
      cfg.ports.assign(key.substr(6),
                       static_cast<PortId>(parse_uint(value, line_no, key)));
    } else {
      throw ParseError(line_no, "unknown key: " + key);
    }
  }
  if (!have_dtminus || !have_dtplus)
    throw ParseError(line_no, "dtminus.default and dtplus.default are mandatory");
  if (!have_bminus || !have_bplus)
    throw ParseError(line_no, "bound.minus and bound.plus are mandatory");
  try {
    cfg.monitor.slack.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
  for (const auto& entry : cfg.ports.all()) cfg.alphabet.add_symbol(entry.first);
  for (const auto& [a, b] : independents) {
    cfg.alphabet.add_symbol(a);
    cfg.alphabet.add_symbol(b);
    try {
      cfg.alphabet.add_independent(a, b);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return cfg;
}

std::string serialize_config(const FileConfig& cfg) {
  std::ostringstream os;
  const auto& s = cfg.monitor.slack;
  os << "dtminus.default=" << s.dt_minus_default << '\n';
  os << "dtplus.default=" << s.dt_plus_default << '\n';
  for (const auto& [k, v] : s.dt_minus) os << "dtminus." << k << '=' << v << '\n';
  for (const auto& [k, v] : s.dt_plus) os << "dtplus." << k << '=' << v << '\n';
  os << "bound.minus=" << s.bound_minus << '\n';
  os << "bound.plus=" << s.bound_plus << '\n';
  os << "ddep=" << cfg.monitor.dep_window << '\n';
  os << "mode=" << (cfg.monitor.optional_mode ? "optional" : "plain") << '\n';
  os << "term="
     << (cfg.monitor.termination.mode == TerminationPolicy::Mode::Explicit
             ? "explicit"
             : "convergent")
     << '\n';
  if (cfg.monitor.termination.mode == TerminationPolicy::Mode::Convergent)
    os << "stabilization.window=" << cfg.monitor.termination.stabilization_window
       << '\n';
  for (const auto& [a, b] : cfg.alphabet.independent_pairs())
    os << "independent=" << a << ':' << b << '\n';
  for (const auto& [name, port] : cfg.ports.all())
    os << "ports." << name << '=' << port << '\n';
  return os.str();
}

EventId ReportWriter::spec_id(VertexId v) const {
  return spec_ids_ && v < spec_ids_->size() ? (*spec_ids_)[v] : v;
}

EventId ReportWriter::impl_id(EventId e) const {
  return impl_ids_ && e < impl_ids_->size() ? (*impl_ids_)[e] : e;
}

void ReportWriter::match(const MatchRecord& m) {
  out_ << "MATCH s=" << spec_id(m.spec_vertex) << " i=" << impl_id(m.impl_event)
       << " ts=" << m.theta_s << " ti=" << m.theta_i << "\n";
}

void ReportWriter::failure(const FailureReport& f) {
  if (f.kind == FailureReport::Kind::MissingOutput)
    out_ << "FAIL kind=missing id=" << spec_id(f.offender) << " t=" << f.time
         << "\n";
  else
    out_ << "FAIL kind=unexpected id=" << impl_id(f.offender) << " t=" << f.time
         << "\n";
}

void ReportWriter::verdict(Verdict v, Tick t) {
  out_ << "VERDICT " << to_string(v) << " t=" << t << "\n";
}

}  // namespace tracematch
