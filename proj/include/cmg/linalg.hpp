#ifndef CMG_LINALG_HPP
#define CMG_LINALG_HPP

#include <map>
#include <utility>
#include <vector>

#include "cmg/complex.hpp"

namespace cmg {

// Dense matrix over F_p, row-major. Entries always reduced to [0, p).
struct FieldMatrix {
  int rows = 0, cols = 0, p = 2;
  std::vector<int> a;

  FieldMatrix() = default;
  FieldMatrix(int r, int c, int p_) : rows(r), cols(c), p(p_), a(size_t(r) * c, 0) {}

  int& at(int r, int c) { return a[size_t(r) * cols + c]; }
  int at(int r, int c) const { return a[size_t(r) * cols + c]; }
  bool operator==(const FieldMatrix&) const = default;

  static FieldMatrix identity(int n, int p);
};

int normalize_mod(long long x, int p);
int inverse_mod(int a, int p);

FieldMatrix matmul(const FieldMatrix& A, const FieldMatrix& B);
int rank(FieldMatrix M);

// Columns form a basis of ker(M).
FieldMatrix kernel_basis(const FieldMatrix& M);

// Sparse chain: (simplex id, coefficient) terms, ids strictly increasing.
using Chain = std::vector<std::pair<int, int>>;

struct HomologySummary {
  std::map<int, int> betti;                 // zero ranks omitted
  std::map<int, std::vector<Chain>> basis;  // representative relative cycles

  int betti_of(int k) const {
    auto it = betti.find(k);
    return it == betti.end() ? 0 : it->second;
  }
  bool trivial() const { return betti.empty(); }
};

// Reduction context for the quotient complex C(P)/C(E) of a closed pair.
// Cells are the simplices of P minus E in ascending id order, which is
// dimension-monotone, so one left-to-right lowest-one reduction of the
// boundary matrix yields homology ranks, basis cycles, and a routine that
// rewrites any relative cycle in the chosen basis.
class PairHomology {
 public:
  PairHomology(const SimplicialComplex& K, const SimplexSet& P, const SimplexSet& E, int p);

  const SimplexSet& P() const { return P_; }
  const SimplexSet& E() const { return E_; }
  int characteristic() const { return p_; }

  int num_cells() const { return int(cells_.size()); }
  int cell_id(int local) const { return cells_[local]; }
  int local_of(int simplex_id) const { return local_[simplex_id]; }
  int dim_of_cell(int local) const { return dims_[local]; }

  int betti(int k) const;
  std::map<int, int> betti_map() const;

  // Homology basis columns of dimension k, in reduction order.
  const std::vector<int>& basis_columns(int k) const;
  // Dense coefficient vector (over all cells) of basis element j of dim k.
  std::vector<int> basis_vector(int k, int j) const;
  Chain basis_chain(int k, int j) const;

  // Coordinates of the relative cycle z (dense over cells) in the dim-k
  // basis. Throws BadInput when z is not a relative cycle.
  std::vector<int> coords_of(int k, std::vector<int> z) const;

 private:
  SimplexSet P_, E_;
  int p_;
  std::vector<int> cells_;
  std::vector<int> local_;
  std::vector<int> dims_;
  std::vector<std::vector<int>> R_, V_;  // reduced boundary, change of basis
  std::vector<int> low_;                 // per column, -1 for zero columns
  std::vector<int> pivot_of_row_;        // row -> column with that low, -1 if none
  std::map<int, std::vector<int>> basis_cols_;
};

HomologySummary relative_homology(const SimplicialComplex& K, const SimplexSet& P,
                                  const SimplexSet& E, int p);

// Matrix of H_k(P', E') -> H_k(P, E) induced by inclusion of pairs.
FieldMatrix induced_inclusion_map(const SimplicialComplex& K, const PairHomology& sub,
                                  const PairHomology& sup, int k);
FieldMatrix induced_inclusion_map(const SimplicialComplex& K, const SimplexSet& Psub,
                                  const SimplexSet& Esub, const SimplexSet& Psup,
                                  const SimplexSet& Esup, int k, int p);

// Matrix of H_k(K) -> H_k(L) induced by a vertex map (collapses allowed:
// a simplex whose image loses vertices maps to the zero chain).
FieldMatrix induced_simplicial_map(const SimplicialComplex& K, const SimplicialComplex& L,
                                   const std::map<int, int>& vertex_map, int k, int p);

}  // namespace cmg

#endif
