#pragma once

#include <vector>

#include "tracematch/types.hpp"

namespace tracematch {

// Labeled strict partial order over dense vertex ids 0..n-1. The order is
// kept transitively closed at all times; the transitive reduction (immediate
// precedence) is computed on demand.
class Pomset {
 public:
  Pomset() = default;

  VertexId add_vertex(EventLabel label);

  // Adds u < v and re-closes. Throws std::invalid_argument if the edge would
  // create a cycle (antisymmetry violation) or is reflexive.
  void add_edge(VertexId u, VertexId v);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  const EventLabel& label(VertexId v) const { return labels_[v]; }
  const std::vector<EventLabel>& labels() const { return labels_; }

  bool precedes(VertexId u, VertexId v) const { return before_[u][v]; }
  bool comparable(VertexId u, VertexId v) const {
    return before_[u][v] || before_[v][u];
  }
  bool concurrent(VertexId u, VertexId v) const {
    return u != v && !comparable(u, v);
  }

  // u immediately precedes v: u < v with no vertex strictly between.
  bool immediately_precedes(VertexId u, VertexId v) const;

  std::vector<std::pair<VertexId, VertexId>> edges() const;
  std::vector<std::pair<VertexId, VertexId>> reduction_edges() const;

  // Vertices of `subset` with no strict predecessor inside `subset`.
  std::vector<VertexId> minimal_of(const std::vector<VertexId>& subset) const;
  std::vector<VertexId> minimal() const;

  // History: v itself plus all its strict predecessors.
  std::vector<VertexId> history(VertexId v) const;
  std::vector<VertexId> strict_successors(VertexId v) const;

  std::size_t edge_count() const;

  // Order- and label-isomorphism under the canonical occurrence-preserving
  // bijection (k-th occurrence of each label maps to k-th occurrence).
  // For pomsets whose equal-label vertices are totally ordered this decides
  // isomorphism exactly.
  bool isomorphic(const Pomset& other) const;

  bool operator==(const Pomset& other) const {
    return labels_ == other.labels_ && before_ == other.before_;
  }

 private:
  void close_over(VertexId u, VertexId v);

  std::vector<EventLabel> labels_;
  std::vector<std::vector<bool>> before_;  // before_[u][v] == u < v, closed
};

}  // namespace tracematch
