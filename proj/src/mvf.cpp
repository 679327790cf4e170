#include "cmg/mvf.hpp"

#include <algorithm>
#include <map>

#include "cmg/linalg.hpp"

namespace cmg {

bool MultivectorField::is_critical(int v) const {
  {
    std::lock_guard<std::mutex> lock(*mu_);
    if (critical_[v] >= 0) return critical_[v] != 0;
  }
  SimplexSet cl = closure(*K_, vectors_[v]);
  SimplexSet mo = cl - vectors_[v];
  PairHomology ph(*K_, cl, mo, p_);
  bool crit = !ph.betti_map().empty();
  std::lock_guard<std::mutex> lock(*mu_);
  critical_[v] = crit ? 1 : 0;
  return crit;
}

static bool prime(int p) {
  if (p < 2) return false;
  for (int d = 2; (long long)d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

MultivectorField build_field(std::shared_ptr<const SimplicialComplex> K,
                             const std::vector<std::vector<int>>& partition, int p) {
  if (!prime(p)) throw Error(ErrorCode::BadInput, "characteristic must be prime");
  const SimplicialComplex& C = *K;
  int n = C.size();
  std::vector<int> owner(n, -1);
  std::vector<SimplexSet> vecs;
  for (const auto& ids : partition) {
    if (ids.empty()) throw Error(ErrorCode::NotPartition, "empty multivector");
    SimplexSet v(n);
    for (int id : ids) {
      if (id < 0 || id >= n)
        throw Error(ErrorCode::BadInput, "simplex index out of range", {id});
      if (owner[id] >= 0)
        throw Error(ErrorCode::NotPartition, "simplex covered twice: " + C.label(id), {id});
      owner[id] = int(vecs.size());
      v.set(id);
    }
    vecs.push_back(std::move(v));
  }
  for (int id = 0; id < n; ++id)
    if (owner[id] < 0)
      throw Error(ErrorCode::NotPartition, "simplex not covered: " + C.label(id), {id});

  for (const auto& v : vecs) {
    SimplexSet between = closure(C, v);
    between &= star(C, v);
    between -= v;
    if (!between.empty())
      throw Error(ErrorCode::NotConvex,
                  "multivector not convex, " + C.label(between.first()) +
                      " lies between members",
                  {v.first(), between.first()});
  }

  std::sort(vecs.begin(), vecs.end(),
            [](const SimplexSet& a, const SimplexSet& b) { return a.first() < b.first(); });

  MultivectorField f;
  f.mu_ = std::make_unique<std::mutex>();
  f.K_ = std::move(K);
  f.p_ = p;
  f.vectors_ = std::move(vecs);
  f.vector_of_.assign(n, -1);
  for (int v = 0; v < int(f.vectors_.size()); ++v)
    f.vectors_[v].for_each([&](int id) { f.vector_of_[id] = v; });
  f.critical_.assign(f.vectors_.size(), -1);
  return f;
}

SimplexSet fv(const MultivectorField& f, int sigma) {
  SimplexSet out = f.vector(f.vector_of(sigma));
  out |= f.complex().closure_of(sigma);
  return out;
}

bool is_critical(const MultivectorField& f, int v) { return f.is_critical(v); }

bool is_refinement(const MultivectorField& f1, const MultivectorField& f2) {
  if (!f1.same_complex(f2))
    throw Error(ErrorCode::DifferentComplex, "fields live on different complexes");
  for (int v = 0; v < f1.num_vectors(); ++v) {
    int target = f2.vector_of(f1.vector(v).first());
    if (!f2.vector(target).contains(f1.vector(v))) return false;
  }
  return true;
}

MultivectorField intersect_fields(const MultivectorField& f1, const MultivectorField& f2) {
  if (!f1.same_complex(f2))
    throw Error(ErrorCode::DifferentComplex, "fields live on different complexes");
  if (f1.characteristic() != f2.characteristic())
    throw Error(ErrorCode::BadInput, "fields disagree on the coefficient field");
  const SimplicialComplex& C = f1.complex();
  std::map<std::pair<int, int>, std::vector<int>> parts;
  for (int id = 0; id < C.size(); ++id)
    parts[{f1.vector_of(id), f2.vector_of(id)}].push_back(id);
  std::vector<std::vector<int>> partition;
  partition.reserve(parts.size());
  for (auto& [key, ids] : parts) partition.push_back(std::move(ids));
  MultivectorField out = build_field(f1.complex_ptr(), partition, f1.characteristic());
  if (!is_refinement(out, f1) || !is_refinement(out, f2))
    throw Error(ErrorCode::ValidationFailed, "intersection is not a refinement");
  return out;
}

}  // namespace cmg
