#ifndef CMG_CONLEY_HPP
#define CMG_CONLEY_HPP

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "cmg/dynamics.hpp"
#include "cmg/linalg.hpp"

namespace cmg {

struct IndexPair {
  enum class Kind { Plain, InN };
  SimplexSet P, E, N;
  Kind kind = Kind::InN;
  const MultivectorField* field = nullptr;

  SimplexSet interior() const { return P - E; }
};

// Per-clause validation of the index pair definitions. Plain pairs check
//   F(E) ∩ P ⊆ E,  F(P∖E) ⊆ P
// and in-N pairs check
//   F(E) ∩ N ⊆ E,  F(P) ∩ N ⊆ P,  F(P∖E) ⊆ N.
// The associated invariant set inv(P∖E) is always recomputed so callers can
// compare it against the set they believe the pair represents.
struct IndexPairReport {
  struct Clause {
    bool pass = true;
    std::vector<int> witness;
  };
  bool structural_ok = true;  // E ⊆ P (⊆ N for in-N), all closed
  std::vector<int> structural_witness;
  std::vector<Clause> clauses;
  SimplexSet invariant;

  bool pass() const {
    if (!structural_ok) return false;
    for (const auto& c : clauses)
      if (!c.pass) return false;
    return true;
  }
};

struct MorseDecomposition {
  std::vector<SimplexSet> sets;  // ordered by minimal member id
  SimplexSet N;
  // leq[i][j]: set i is below set j (some path from j reaches i in N)
  std::vector<std::vector<char>> leq;
  // transitive reduction of the strict order, as (upper, lower) pairs
  std::vector<std::pair<int, int>> cover_edges;
};

struct ConleyIndex {
  std::map<int, int> betti;  // zero ranks omitted

  int betti_of(int k) const {
    auto it = betti.find(k);
    return it == betti.end() ? 0 : it->second;
  }
  // coefficient array of the Poincare polynomial, highest nonzero last
  std::vector<int> poincare() const;
  bool operator==(const ConleyIndex&) const = default;
};

struct ConleyMorseGraph {
  std::vector<std::vector<int>> poincare;   // per vertex coefficient array
  std::vector<std::pair<int, int>> edges;   // (u, v): direct connection u -> v

  int size() const { return int(poincare.size()); }
  bool has_edge(int u, int v) const;
};

// Essential components of the invariant part of N, with the reachability
// order. Every returned set is verified isolated in N.
MorseDecomposition minimal_morse_decomposition(const MultivectorField& f, const SimplexSet& N);

// Wraps caller-chosen Morse sets into a decomposition, in the order given.
// Each set must be a nonempty isolated invariant subset of N, the sets must
// be pairwise disjoint, every essential component of inv(N) must land inside
// one of them, and the reachability order must be acyclic.
MorseDecomposition assemble_morse_decomposition(const MultivectorField& f, const SimplexSet& N,
                                                const std::vector<SimplexSet>& sets);

// (pf_N(cl S), pf_N(mo S)), validated as an index pair in N for S.
IndexPair index_pair_pf(const MultivectorField& f, const SimplexSet& N, const SimplexSet& S);

IndexPairReport validate_index_pair(const IndexPair& ip);

// (P1 ∩ P2, E1 ∩ E2) under the intersection field. The caller supplies the
// intersection field (and keeps it alive); the overload returning a holder
// computes it on the spot.
IndexPair intersect_index_pairs(const IndexPair& a, const IndexPair& b,
                                const MultivectorField& intersection_field);

struct IntersectedPair {
  std::shared_ptr<const MultivectorField> field;
  IndexPair pair;
};
IntersectedPair intersect_index_pairs(const IndexPair& a, const IndexPair& b);

// (P ∩ N', E ∩ N') in the smaller isolating set; the invariant set must not
// change and the interior must already live inside N'.
IndexPair restrict_index_pair(const IndexPair& ip, const SimplexSet& Nprime);

// k rounds of absorbing whole multivectors into P. A vector qualifies when
// it lies in N, misses E, its mouth is already inside the round's starting
// P, and it avoids every Morse set not contained in the pair's invariant
// set. Candidates are judged against the P from the start of the round, so
// one round adds an entire batch at once.
IndexPair thicken_index_pair(const MultivectorField& f, const IndexPair& ip,
                             const MorseDecomposition& decomposition, int rounds);

ConleyIndex conley_index(const IndexPair& ip);
ConleyIndex conley_index(const IndexPair& ip, int p);

ConleyMorseGraph conley_morse_graph(const MultivectorField& f, const SimplexSet& N,
                                    const MorseDecomposition& decomposition);

}  // namespace cmg

#endif
