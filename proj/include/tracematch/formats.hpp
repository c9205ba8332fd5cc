#pragma once

#include <iosfwd>
#include <string>

#include "tracematch/abstraction.hpp"
#include "tracematch/monitor.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_no, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
  std::size_t line;
};

// Line-oriented event record:
//   EVT id=<uint> side=<S|I> t=<uint> label=<token> port=<uint>
//       [payload=<hex>] [opt=1] [deps=<id>,<id>,...]
// Fields appear in exactly this order; '#' starts a comment line.
struct TraceRecord {
  EventId id = 0;
  char side = 'S';
  Tick t = 0;
  std::string label;
  PortId port = 0;
  std::string payload;  // raw bytes
  bool opt = false;
  std::vector<EventId> deps;

  bool operator==(const TraceRecord&) const = default;
};

TraceRecord parse_record_line(const std::string& line, std::size_t line_no);
std::string serialize_record(const TraceRecord& rec);

// Parses a whole stream, skipping comments and blank lines. Validates that
// ids are unique per side, records are sorted by t, and deps reference
// earlier spec records only.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::string serialize_trace(const std::vector<TraceRecord>& records);

// Record ids are arbitrary; positions inside the words are dense. The maps
// translate between them for reporting.
struct SideTraces {
  TimedWord spec_word;
  DependencyDecl deps;
  std::set<EventId> optional_ids;     // word positions
  std::vector<EventId> spec_file_ids; // position -> record id
  TimedWord impl_word;
  std::vector<EventId> impl_file_ids;
  PortAssignment ports;               // gathered from the records
};

SideTraces split_sides(const std::vector<TraceRecord>& records);

std::vector<TraceRecord> spec_records(const TimedWord& word,
                                      const DependencyDecl& deps,
                                      const std::set<EventId>& optional_ids,
                                      const PortAssignment& ports);
std::vector<TraceRecord> impl_records(const TimedWord& word,
                                      const PortAssignment& ports);

// key=value configuration: slacks and bounds (defaults mandatory), the
// dependency window, mode, independence pairs, ports, termination.
struct FileConfig {
  MonitorConfig monitor;
  ConcurrentAlphabet alphabet;
  PortAssignment ports;
};

FileConfig parse_config(std::istream& in);
std::string serialize_config(const FileConfig& cfg);

// MATCH / FAIL / VERDICT lines; ids are translated back to record ids when
// maps are given.
class ReportWriter {
 public:
  ReportWriter(std::ostream& out, const std::vector<EventId>* spec_ids = nullptr,
               const std::vector<EventId>* impl_ids = nullptr)
      : out_(out), spec_ids_(spec_ids), impl_ids_(impl_ids) {}

  void match(const MatchRecord& m);
  void failure(const FailureReport& f);
  void verdict(Verdict v, Tick t);

 private:
  EventId spec_id(VertexId v) const;
  EventId impl_id(EventId e) const;

  std::ostream& out_;
  const std::vector<EventId>* spec_ids_;
  const std::vector<EventId>* impl_ids_;
};

std::string to_hex(const std::string& bytes);
std::string from_hex(const std::string& hex, std::size_t line_no);

}  // namespace tracematch
