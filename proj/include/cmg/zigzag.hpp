#ifndef CMG_ZIGZAG_HPP
#define CMG_ZIGZAG_HPP

#include <memory>
#include <string>
#include <vector>

#include "cmg/conley.hpp"
#include "cmg/linalg.hpp"

namespace cmg {

// Sequence of F_p vector spaces at positions 1..2n-1. Odd positions are the
// primary spaces, even positions are junctions mapping outward into both odd
// neighbors. Junction j (0-based) sits at global position 2j+2.
struct ZigzagModule {
  std::vector<int> dims;          // dims[pos-1]
  std::vector<FieldMatrix> left;  // junction -> left neighbor
  std::vector<FieldMatrix> right; // junction -> right neighbor
  int p = 2;
  int homology_dim = -1;

  int positions() const { return int(dims.size()); }
  int junctions() const { return int(left.size()); }
  int dim_at(int pos) const { return dims[pos - 1]; }
};

void validate_module(const ZigzagModule& m);

struct Bar {
  int dim = 0;
  int birth = 0, death = 0;  // global positions, birth <= death
  bool birth_open = false, death_open = false;  // true at junction endpoints

  // odd positions belong to field ceil(pos/2); junction endpoints are open
  int birth_field() const { return (birth + 1) / 2; }
  int death_field() const { return (death + 1) / 2; }
  bool covers(int pos) const { return birth <= pos && pos <= death; }
  bool operator==(const Bar&) const = default;
};

struct RelativeZigzag {
  std::vector<std::shared_ptr<const MultivectorField>> gap_fields;
  std::vector<IndexPair> gap_pairs;
  std::vector<ZigzagModule> modules;  // one per homology dimension 0..top
};

// Tower of relative pairs with junction slots supplied by the caller.
std::vector<ZigzagModule> build_relative_zigzag(const SimplicialComplex& K,
                                                const std::vector<IndexPair>& pairs,
                                                const std::vector<IndexPair>& gap_pairs, int p);

// Junction slots default to intersections of the flanking pairs.
RelativeZigzag build_relative_zigzag(const SimplicialComplex& K,
                                     const std::vector<IndexPair>& pairs, int p);

// One slot of a graph tower: a graph as a 1-complex, plus (on junction
// slots) vertex maps into both neighbors. A null complex is an empty slot.
struct GraphSlot {
  std::shared_ptr<const SimplicialComplex> complex;
  std::map<int, int> to_left, to_right;
};

// Modules in dimensions 0 and 1; arrows are induced by the vertex maps,
// with collapsed edges mapping to zero.
std::vector<ZigzagModule> build_graph_zigzag(const std::vector<GraphSlot>& slots, int p);

// Multiset of interval summands via generalized ranks: the number of bars
// containing a window equals the rank of the limit-to-colimit map over it,
// and births/deaths fall out by inclusion-exclusion.
std::vector<Bar> interval_decompose(const ZigzagModule& m);

int generalized_rank(const ZigzagModule& m, int i, int j);

struct AuditReport {
  bool pass = true;
  std::vector<std::string> failures;
};

// Consistency of a claimed decomposition: per-position coverage counts,
// per-arrow spanning counts vs. matrix ranks, and the composable-run bound
// (runs degenerate to single arrows under the outward orientation).
AuditReport audit_barcode(const ZigzagModule& m, const std::vector<Bar>& bars);

}  // namespace cmg

#endif
