#include "tracematch/trace_ops.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace tracematch {

Pomset pomset_of_word(const Word& word, const ConcurrentAlphabet& alph) {
  Pomset p;
  for (const auto& sym : word) {
    if (!alph.contains(sym))
      throw std::invalid_argument("symbol not in alphabet: " + sym);
    p.add_vertex(EventLabel{sym, ""});
  }
  for (VertexId i = 0; i < p.size(); ++i)
    for (VertexId j = i + 1; j < p.size(); ++j)
      if (alph.dependent(word[i], word[j])) p.add_edge(i, j);
  return p;
}

namespace {

void enumerate_extensions(const Pomset& p, std::vector<bool>& used, Word& prefix,
                          std::set<Word>& out) {
  if (prefix.size() == p.size()) {
    out.insert(prefix);
    return;
  }
  for (VertexId v = 0; v < p.size(); ++v) {
    if (used[v]) continue;
    bool ready = true;
    for (VertexId u = 0; u < p.size(); ++u)
      if (!used[u] && p.precedes(u, v)) {
        ready = false;
        break;
      }
    if (!ready) continue;
    used[v] = true;
    prefix.push_back(p.label(v).name);
    enumerate_extensions(p, used, prefix, out);
    prefix.pop_back();
    used[v] = false;
  }
}

}  // namespace

std::set<Word> linearizations(const Pomset& p, std::size_t cap) {
  if (p.size() > cap)
    throw CapExceeded("linearization enumeration over " + std::to_string(p.size()) +
                      " vertices exceeds cap " + std::to_string(cap));
  std::set<Word> out;
  std::vector<bool> used(p.size(), false);
  Word prefix;
  enumerate_extensions(p, used, prefix, out);
  return out;
}

bool mazurkiewicz_equivalent(const Word& u, const Word& v,
                             const ConcurrentAlphabet& alph) {
  if (u.size() != v.size()) return false;
  return pomset_of_word(u, alph).isomorphic(pomset_of_word(v, alph));
}

namespace {

Pomset disjoint_union(const Pomset& p, const Pomset& q, bool cross_edges) {
  Pomset out;
  for (VertexId v = 0; v < p.size(); ++v) out.add_vertex(p.label(v));
  for (VertexId v = 0; v < q.size(); ++v) out.add_vertex(q.label(v));
  const auto shift = static_cast<VertexId>(p.size());
  for (auto [a, b] : p.edges()) out.add_edge(a, b);
  for (auto [a, b] : q.edges()) out.add_edge(a + shift, b + shift);
  if (cross_edges)
    for (VertexId a = 0; a < p.size(); ++a)
      for (VertexId b = 0; b < q.size(); ++b) out.add_edge(a, b + shift);
  return out;
}

}  // namespace

Pomset compose_parallel(const Pomset& p, const Pomset& q) {
  return disjoint_union(p, q, false);
}

Pomset compose_sequential(const Pomset& p, const Pomset& q) {
  return disjoint_union(p, q, true);
}

bool satisfies_trace_conditions(const Pomset& p, const ConcurrentAlphabet& alph) {
  for (VertexId u = 0; u < p.size(); ++u)
    for (VertexId v = 0; v < p.size(); ++v) {
      if (u == v) continue;
      if (p.concurrent(u, v) && !alph.independent(p.label(u).name, p.label(v).name))
        return false;
      if (p.immediately_precedes(u, v) &&
          !alph.dependent(p.label(u).name, p.label(v).name))
        return false;
    }
  return true;
}

bool is_prefix(const Pomset& s, const Pomset& t, const ConcurrentAlphabet& alph) {
  if (!satisfies_trace_conditions(s, alph) || !satisfies_trace_conditions(t, alph))
    throw std::invalid_argument("is_prefix expects trace-pomsets");
  if (s.size() > t.size()) return false;

  // Canonical embedding: k-th occurrence of each label in s onto the k-th
  // occurrence in t. Same-label vertices of a trace-pomset are totally
  // ordered, so the map below lists them in chain order.
  std::map<EventLabel, std::vector<VertexId>> occ_s, occ_t;
  for (VertexId v = 0; v < s.size(); ++v) occ_s[s.label(v)].push_back(v);
  for (VertexId v = 0; v < t.size(); ++v) occ_t[t.label(v)].push_back(v);
  auto chain_order = [](const Pomset& p, std::vector<VertexId>& vs) {
    std::sort(vs.begin(), vs.end(), [&](VertexId a, VertexId b) {
      if (p.precedes(a, b)) return true;
      if (p.precedes(b, a)) return false;
      return a < b;
    });
  };
  std::vector<VertexId> image(s.size());
  for (auto& [label, vs] : occ_s) {
    auto it = occ_t.find(label);
    if (it == occ_t.end() || it->second.size() < vs.size()) return false;
    chain_order(s, vs);
    chain_order(t, it->second);
    for (std::size_t i = 0; i < vs.size(); ++i) image[vs[i]] = it->second[i];
  }

  // Order must transfer exactly in both directions.
  for (VertexId a = 0; a < s.size(); ++a)
    for (VertexId b = 0; b < s.size(); ++b)
      if (s.precedes(a, b) != t.precedes(image[a], image[b])) return false;

  // Image must be downward closed in t.
  std::vector<bool> in_image(t.size(), false);
  for (VertexId v : image) in_image[v] = true;
  for (VertexId v : image)
    for (VertexId u = 0; u < t.size(); ++u)
      if (t.precedes(u, v) && !in_image[u]) return false;
  return true;
}

}  // namespace tracematch
