#include <map>

#include "tracematch/types.hpp"

namespace tracematch {

std::vector<WordViolation> validate_timed_word(const TimedWord& word,
                                               const PortAssignment* ports) {
  std::vector<WordViolation> out;
  const auto& ev = word.events();
  for (std::size_t i = 1; i < ev.size(); ++i)
    if (ev[i].tick < ev[i - 1].tick)
      out.push_back({WordViolation::Kind::NonMonotonic, i, i});

  if (ports) {
    std::map<std::pair<Tick, PortId>, std::size_t> seen;
    for (std::size_t i = 0; i < ev.size(); ++i) {
      const PortId p = ports->port_of(ev[i].label.name);
      auto key = std::make_pair(ev[i].tick, p);
      auto it = seen.find(key);
      if (it != seen.end())
        out.push_back({WordViolation::Kind::PortCollision, it->second, i});
      else
        seen.emplace(key, i);
    }
  }
  return out;
}

}  // namespace tracematch
