#pragma once

#include <set>
#include <string>
#include <vector>

#include "tracematch/pomset.hpp"
#include "tracematch/types.hpp"

namespace tracematch {

using Word = std::vector<std::string>;

constexpr std::size_t kDefaultLinearizationCap = 12;

// Vertices are the occurrences of `word` in order; the order is the
// transitive closure of position pairs whose symbols are dependent.
// Throws std::invalid_argument on a symbol outside the alphabet.
Pomset pomset_of_word(const Word& word, const ConcurrentAlphabet& alph);

// All label sequences of total orders extending the partial order.
// Throws CapExceeded when the pomset has more than `cap` vertices.
std::set<Word> linearizations(const Pomset& p,
                              std::size_t cap = kDefaultLinearizationCap);

// True iff the two words induce order- and label-isomorphic pomsets,
// i.e. one can be rewritten into the other by swapping adjacent
// independent events.
bool mazurkiewicz_equivalent(const Word& u, const Word& v,
                             const ConcurrentAlphabet& alph);

// Disjoint union; vertices of q are renamed past those of p.
Pomset compose_parallel(const Pomset& p, const Pomset& q);
// Disjoint union plus all edges from p into q.
Pomset compose_sequential(const Pomset& p, const Pomset& q);

// Prefix test for traces-as-pomsets: true iff s embeds onto a downward
// closed subset of t under the canonical occurrence-preserving map.
// Both arguments must satisfy the trace-pomset conditions over alph.
bool is_prefix(const Pomset& s, const Pomset& t, const ConcurrentAlphabet& alph);

// Trace-pomset conditions: concurrent vertices carry independent symbols and
// immediate precedence implies dependence.
bool satisfies_trace_conditions(const Pomset& p, const ConcurrentAlphabet& alph);

}  // namespace tracematch
