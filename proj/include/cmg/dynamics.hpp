#ifndef CMG_DYNAMICS_HPP
#define CMG_DYNAMICS_HPP

#include <optional>
#include <vector>

#include "cmg/mvf.hpp"

namespace cmg {

// Successor relation of the dynamics generator restricted to a domain.
// Successor sets are derived on the fly from the field's vectors and the
// complex's closure/star tables; nothing is materialized per node.
struct DynDigraph {
  const MultivectorField* field = nullptr;
  SimplexSet domain;

  SimplexSet succ(int sigma) const;   // fv(sigma) ∩ domain
  SimplexSet preds(int sigma) const;  // ([sigma] ∪ st(sigma)) ∩ domain
};

DynDigraph build_digraph(const MultivectorField& f, const SimplexSet& A);

struct EssentialScc {
  enum class Anchor { CriticalVector, MultiVectorCycle };
  SimplexSet members;
  Anchor anchor_kind;
};

// Strongly connected components supporting essential recurrence: those
// containing a critical-vector simplex, or meeting at least two
// multivectors. Ordered by minimal member id.
std::vector<EssentialScc> essential_sccs(const MultivectorField& f, const SimplexSet& A);

SimplexSet invariant_part(const MultivectorField& f, const SimplexSet& A);

// Forward reachability of A inside the digraph on closed N.
SimplexSet push_forward(const MultivectorField& f, const SimplexSet& N, const SimplexSet& A);

struct IsolationResult {
  bool isolated = false;
  // 1 = not invariant, 2 = not vector-compatible, 3 = a path leaves S
  // through N and returns; 0 when isolated.
  int failed_clause = 0;
  std::vector<int> witness;  // offending simplices, or the returning path
  explicit operator bool() const { return isolated; }
};

IsolationResult is_isolated(const MultivectorField& f, const SimplexSet& N, const SimplexSet& S);

// S plus every simplex lying on a path in N from S back to S. Requires S
// invariant; the result is re-checked to be isolated.
SimplexSet isolated_completion(const MultivectorField& f, const SimplexSet& N,
                               const SimplexSet& S);

// Path in N between two Morse sets whose interior avoids every listed set;
// from == to asks for a self-connection with nonempty interior.
std::optional<std::vector<int>> direct_connection(const MultivectorField& f, const SimplexSet& N,
                                                  const std::vector<SimplexSet>& morse_sets,
                                                  int from, int to);

// Generalized connection search with an arbitrary forbidden interior.
std::optional<std::vector<int>> connection_path(const MultivectorField& f, const SimplexSet& N,
                                                const SimplexSet& from, const SimplexSet& to,
                                                const SimplexSet& forbidden_interior,
                                                bool require_nonempty_interior);

// Definitional recheck of invariant_part: enumerates anchor cycles, splices
// an explicit eventually-periodic solution, and verifies essentialness
// literally on a finite window. Exponential bookkeeping, |A| <= 14.
SimplexSet oracle_invariant_part(const MultivectorField& f, const SimplexSet& A);

}  // namespace cmg

#endif
