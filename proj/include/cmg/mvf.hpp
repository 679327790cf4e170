#ifndef CMG_MVF_HPP
#define CMG_MVF_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "cmg/complex.hpp"

namespace cmg {

// Partition of a complex into convex multivectors. Vector ids are assigned
// by minimal contained simplex id, so equal partitions get equal ids.
// Criticality is computed on demand and cached; the cache is the only
// mutable state and is guarded for concurrent readers.
class MultivectorField {
 public:
  const SimplicialComplex& complex() const { return *K_; }
  const std::shared_ptr<const SimplicialComplex>& complex_ptr() const { return K_; }
  int characteristic() const { return p_; }

  int num_vectors() const { return int(vectors_.size()); }
  int vector_of(int simplex_id) const { return vector_of_[simplex_id]; }
  const SimplexSet& vector(int v) const { return vectors_[v]; }

  bool is_critical(int v) const;

  bool same_complex(const MultivectorField& other) const { return K_.get() == other.K_.get(); }

  friend MultivectorField build_field(std::shared_ptr<const SimplicialComplex> K,
                                      const std::vector<std::vector<int>>& partition, int p);

 private:
  std::shared_ptr<const SimplicialComplex> K_;
  int p_ = 2;
  std::vector<SimplexSet> vectors_;
  std::vector<int> vector_of_;
  mutable std::unique_ptr<std::mutex> mu_;  // owned indirectly so the field stays movable
  mutable std::vector<int8_t> critical_;    // -1 unknown
};

MultivectorField build_field(std::shared_ptr<const SimplicialComplex> K,
                             const std::vector<std::vector<int>>& partition, int p = 2);

// The dynamics generator: sigma's multivector united with its closure.
SimplexSet fv(const MultivectorField& f, int sigma);

bool is_critical(const MultivectorField& f, int v);

// Every vector of f1 contained in a single vector of f2.
bool is_refinement(const MultivectorField& f1, const MultivectorField& f2);

// Field of nonempty pairwise intersections; refines both inputs.
MultivectorField intersect_fields(const MultivectorField& f1, const MultivectorField& f2);

}  // namespace cmg

#endif
