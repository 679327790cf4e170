#ifndef CMG_COMPLEX_HPP
#define CMG_COMPLEX_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmg {

enum class ErrorCode {
  EmptyInput,
  DuplicateSimplex,
  BadInput,
  NotPartition,
  NotConvex,
  NotClosed,
  NotNested,
  NotSubpair,
  NotSimplicial,
  DifferentComplex,
  NotContained,
  NotInvariant,
  NotIsolated,
  ValidationFailed,
  DifferentN,
  InteriorEscapes,
  InvariantChanged,
  MissingIndexPair,
  TooLarge,
};

const char* error_code_name(ErrorCode c);

// All validation failures carry a code plus the simplex ids that witness
// the violation (may be empty when no single witness exists).
struct Error : std::runtime_error {
  ErrorCode code;
  std::vector<int> witnesses;
  Error(ErrorCode c, const std::string& msg, std::vector<int> w = {})
      : std::runtime_error(msg), code(c), witnesses(std::move(w)) {}
};

// Bitset over simplex ids of one complex. Word-parallel ops keep the
// closure/star sweeps cheap; everything downstream lives on these.
class SimplexSet {
 public:
  SimplexSet() : n_(0) {}
  explicit SimplexSet(int universe_size)
      : n_(universe_size), words_((universe_size + 63) / 64, 0) {}

  int universe_size() const { return n_; }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { words_[i >> 6] |= (uint64_t{1} << (i & 63)); }
  void reset(int i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }

  bool empty() const;
  int count() const;
  bool contains(const SimplexSet& other) const;  // other ⊆ this
  bool intersects(const SimplexSet& other) const;

  SimplexSet& operator|=(const SimplexSet& o);
  SimplexSet& operator&=(const SimplexSet& o);
  SimplexSet& operator-=(const SimplexSet& o);
  friend SimplexSet operator|(SimplexSet a, const SimplexSet& b) { return a |= b; }
  friend SimplexSet operator&(SimplexSet a, const SimplexSet& b) { return a &= b; }
  friend SimplexSet operator-(SimplexSet a, const SimplexSet& b) { return a -= b; }
  bool operator==(const SimplexSet& o) const { return n_ == o.n_ && words_ == o.words_; }
  bool operator!=(const SimplexSet& o) const { return !(*this == o); }

  // Lexicographically compares membership as sorted id lists.
  bool operator<(const SimplexSet& o) const;

  int first() const;  // smallest member id, -1 if empty
  std::vector<int> ids() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        fn(int(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

 private:
  int n_;
  std::vector<uint64_t> words_;
};

class SimplicialComplex {
 public:
  int size() const { return int(simplices_.size()); }
  int dim_of(int id) const { return int(simplices_[id].size()) - 1; }
  int top_dim() const { return top_dim_; }
  const std::vector<int>& vertices_of(int id) const { return simplices_[id]; }
  const std::vector<int>& faces_of(int id) const { return faces_[id]; }    // codim 1
  const std::vector<int>& cofaces_of(int id) const { return cofaces_[id]; }

  // -1 if the sorted vertex tuple is not a simplex of this complex.
  int id_of(const std::vector<int>& sorted_vertices) const;

  const SimplexSet& closure_of(int id) const { return closure_bits_[id]; }
  const SimplexSet& star_of(int id) const { return star_bits_[id]; }

  SimplexSet empty_set() const { return SimplexSet(size()); }
  SimplexSet full_set() const;
  std::string label(int id) const;  // "(0 1 2)" for debugging/witness output

  friend SimplicialComplex build_complex(const std::vector<std::vector<int>>& raw);

 private:
  std::vector<std::vector<int>> simplices_;
  std::map<std::vector<int>, int> index_;
  std::vector<std::vector<int>> faces_, cofaces_;
  std::vector<SimplexSet> closure_bits_, star_bits_;
  int top_dim_ = -1;
};

// Builds the face-closed complex spanned by the input simplices. Ids are
// assigned by (dimension, lexicographic vertex tuple) so identical input
// sets always produce identical ids.
SimplicialComplex build_complex(const std::vector<std::vector<int>>& raw);

SimplexSet closure(const SimplicialComplex& K, const SimplexSet& A);
SimplexSet star(const SimplicialComplex& K, const SimplexSet& A);
SimplexSet mouth(const SimplicialComplex& K, const SimplexSet& A);
bool is_closed(const SimplicialComplex& K, const SimplexSet& A);

// A is convex when no simplex outside A sits between two members of A in
// the face order. Equivalent check: cl(A) ∩ st(A) ⊆ A.
bool is_convex(const SimplicialComplex& K, const SimplexSet& A);

SimplexSet make_set(const SimplicialComplex& K, const std::vector<int>& ids);
SimplexSet set_from_simplices(const SimplicialComplex& K,
                              const std::vector<std::vector<int>>& simplices);

}  // namespace cmg

#endif
