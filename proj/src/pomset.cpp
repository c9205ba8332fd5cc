#include "tracematch/pomset.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace tracematch {

VertexId Pomset::add_vertex(EventLabel label) {
  auto v = static_cast<VertexId>(labels_.size());
  labels_.push_back(std::move(label));
  for (auto& row : before_) row.push_back(false);
  before_.emplace_back(labels_.size(), false);
  return v;
}

void Pomset::add_edge(VertexId u, VertexId v) {
  if (u == v) throw std::invalid_argument("reflexive order edge");
  if (before_[v][u]) throw std::invalid_argument("order edge closes a cycle");
  if (before_[u][v]) return;
  close_over(u, v);
}

void Pomset::close_over(VertexId u, VertexId v) {
  // New pairs: (x, y) for every x in history(u), y in future(v).
  const auto n = size();
  for (VertexId x = 0; x < n; ++x) {
    if (x != u && !before_[x][u]) continue;
    for (VertexId y = 0; y < n; ++y) {
      if (y != v && !before_[v][y]) continue;
      if (x == y || before_[y][x])
        throw std::invalid_argument("order edge closes a cycle");
      before_[x][y] = true;
    }
  }
}

bool Pomset::immediately_precedes(VertexId u, VertexId v) const {
  if (!before_[u][v]) return false;
  for (VertexId z = 0; z < size(); ++z)
    if (before_[u][z] && before_[z][v]) return false;
  return true;
}

std::vector<std::pair<VertexId, VertexId>> Pomset::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId u = 0; u < size(); ++u)
    for (VertexId v = 0; v < size(); ++v)
      if (before_[u][v]) out.emplace_back(u, v);
  return out;
}

std::vector<std::pair<VertexId, VertexId>> Pomset::reduction_edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId u = 0; u < size(); ++u)
    for (VertexId v = 0; v < size(); ++v)
      if (before_[u][v] && immediately_precedes(u, v)) out.emplace_back(u, v);
  return out;
}

std::vector<VertexId> Pomset::minimal_of(
    const std::vector<VertexId>& subset) const {
  std::vector<VertexId> out;
  for (VertexId v : subset) {
    bool blocked = false;
    for (VertexId u : subset)
      if (before_[u][v]) {
        blocked = true;
        break;
      }
    if (!blocked) out.push_back(v);
  }
  return out;
}

std::vector<VertexId> Pomset::minimal() const {
  std::vector<VertexId> all(size());
  for (VertexId v = 0; v < size(); ++v) all[v] = v;
  return minimal_of(all);
}

std::vector<VertexId> Pomset::history(VertexId v) const {
  std::vector<VertexId> out;
  for (VertexId u = 0; u < size(); ++u)
    if (u == v || before_[u][v]) out.push_back(u);
  return out;
}

std::vector<VertexId> Pomset::strict_successors(VertexId v) const {
  std::vector<VertexId> out;
  for (VertexId u = 0; u < size(); ++u)
    if (before_[v][u]) out.push_back(u);
  return out;
}

std::size_t Pomset::edge_count() const {
  std::size_t n = 0;
  for (const auto& row : before_)
    n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  return n;
}

bool Pomset::isomorphic(const Pomset& other) const {
  if (size() != other.size()) return false;
  // Canonical bijection: i-th occurrence of a label here maps to the i-th
  // occurrence of the same label there.
  std::map<EventLabel, std::vector<VertexId>> mine, theirs;
  for (VertexId v = 0; v < size(); ++v) mine[labels_[v]].push_back(v);
  for (VertexId v = 0; v < size(); ++v) theirs[other.labels_[v]].push_back(v);
  if (mine.size() != theirs.size()) return false;

  std::vector<VertexId> map(size());
  for (const auto& [label, vs] : mine) {
    auto it = theirs.find(label);
    if (it == theirs.end() || it->second.size() != vs.size()) return false;
    for (std::size_t i = 0; i < vs.size(); ++i) map[vs[i]] = it->second[i];
  }
  for (VertexId u = 0; u < size(); ++u)
    for (VertexId v = 0; v < size(); ++v)
      if (before_[u][v] != other.before_[map[u]][map[v]]) return false;
  return true;
}

}  // namespace tracematch
