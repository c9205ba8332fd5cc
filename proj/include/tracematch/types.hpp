#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tracematch {

// Discrete time: unsigned 64-bit ticks.
using Tick = std::uint64_t;
using Duration = std::uint64_t;
using PortId = std::uint32_t;
using VertexId = std::uint32_t;
using EventId = std::uint32_t;

constexpr Tick kTickMax = std::numeric_limits<Tick>::max();

inline Tick sat_add(Tick a, Duration b) {
  return (a > kTickMax - b) ? kTickMax : a + b;
}

// Closed tick interval [lo, hi].
struct Interval {
  Tick lo = 0;
  Tick hi = 0;

  bool contains(Tick t) const { return lo <= t && t <= hi; }
  bool operator==(const Interval&) const = default;
};

// An event: symbol name plus opaque payload bytes. Two labels are equal
// iff both name and payload are equal.
struct EventLabel {
  std::string name;
  std::string payload;  // raw bytes, may be empty

  bool operator==(const EventLabel&) const = default;
  auto operator<=>(const EventLabel&) const = default;
};

// Total map from symbol name to port id.
class PortAssignment {
 public:
  PortAssignment() = default;
  explicit PortAssignment(std::map<std::string, PortId> ports)
      : ports_(std::move(ports)) {}

  void assign(const std::string& symbol, PortId port) { ports_[symbol] = port; }

  bool has(const std::string& symbol) const { return ports_.count(symbol) != 0; }

  PortId port_of(const std::string& symbol) const {
    auto it = ports_.find(symbol);
    if (it == ports_.end())
      throw std::invalid_argument("no port assigned to symbol: " + symbol);
    return it->second;
  }

  const std::map<std::string, PortId>& all() const { return ports_; }

 private:
  std::map<std::string, PortId> ports_;
};

struct TimedEvent {
  EventLabel label;
  Tick tick = 0;
  // Monotone insertion index, used for deterministic tie-breaking.
  std::uint32_t seq = 0;
};

// Finite sequence of timed events with weakly monotone ticks.
class TimedWord {
 public:
  TimedWord() = default;

  EventId push(EventLabel label, Tick tick) {
    auto seq = static_cast<std::uint32_t>(events_.size());
    events_.push_back(TimedEvent{std::move(label), tick, seq});
    return seq;
  }

  const std::vector<TimedEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const TimedEvent& operator[](std::size_t i) const { return events_[i]; }

  Tick end_tick() const { return events_.empty() ? 0 : events_.back().tick; }

 private:
  std::vector<TimedEvent> events_;
};

struct WordViolation {
  enum class Kind { NonMonotonic, PortCollision } kind;
  // NonMonotonic: index of the event whose tick decreased.
  // PortCollision: the two colliding event indices.
  std::size_t index_a = 0;
  std::size_t index_b = 0;
};

// Weak monotonicity always; with ports also sequentiality (no two distinct
// events on the same port at the same tick). Violations are data, not faults.
std::vector<WordViolation> validate_timed_word(
    const TimedWord& word, const PortAssignment* ports = nullptr);

// Symbols plus an irreflexive, symmetric independence relation over them.
class ConcurrentAlphabet {
 public:
  ConcurrentAlphabet() = default;
  explicit ConcurrentAlphabet(std::set<std::string> symbols)
      : symbols_(std::move(symbols)) {}

  void add_symbol(const std::string& s) { symbols_.insert(s); }

  void add_independent(const std::string& a, const std::string& b) {
    if (a == b)
      throw std::invalid_argument("independence must be irreflexive: " + a);
    if (!contains(a) || !contains(b))
      throw std::invalid_argument("independence over unknown symbol");
    independent_.insert(ordered(a, b));
  }

  bool contains(const std::string& s) const { return symbols_.count(s) != 0; }

  bool independent(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    return independent_.count(ordered(a, b)) != 0;
  }

  // Dependence is the exact complement of independence.
  bool dependent(const std::string& a, const std::string& b) const {
    return !independent(a, b);
  }

  const std::set<std::string>& symbols() const { return symbols_; }
  const std::set<std::pair<std::string, std::string>>& independent_pairs() const {
    return independent_;
  }

 private:
  static std::pair<std::string, std::string> ordered(const std::string& a,
                                                     const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  std::set<std::string> symbols_;
  std::set<std::pair<std::string, std::string>> independent_;
};

// Thrown when an enumeration or search would exceed its configured cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tracematch
