#include "cmg/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cmg {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DuplicateSimplex: return "DuplicateSimplex";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::NotPartition: return "NotPartition";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::NotSubpair: return "NotSubpair";
    case ErrorCode::NotSimplicial: return "NotSimplicial";
    case ErrorCode::DifferentComplex: return "DifferentComplex";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotIsolated: return "NotIsolated";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::DifferentN: return "DifferentN";
    case ErrorCode::InteriorEscapes: return "InteriorEscapes";
    case ErrorCode::InvariantChanged: return "InvariantChanged";
    case ErrorCode::MissingIndexPair: return "MissingIndexPair";
    case ErrorCode::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

bool SimplexSet::empty() const {
  for (uint64_t w : words_)
    if (w) return false;
  return true;
}

int SimplexSet::count() const {
  int c = 0;
  for (uint64_t w : words_) c += __builtin_popcountll(w);
  return c;
}

bool SimplexSet::contains(const SimplexSet& other) const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (other.words_[i] & ~words_[i]) return false;
  return true;
}

bool SimplexSet::intersects(const SimplexSet& other) const {
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

SimplexSet& SimplexSet::operator|=(const SimplexSet& o) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

SimplexSet& SimplexSet::operator&=(const SimplexSet& o) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

SimplexSet& SimplexSet::operator-=(const SimplexSet& o) {
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

bool SimplexSet::operator<(const SimplexSet& o) const {
  return ids() < o.ids();
}

int SimplexSet::first() const {
  for (size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return int(w * 64 + __builtin_ctzll(words_[w]));
  return -1;
}

std::vector<int> SimplexSet::ids() const {
  std::vector<int> out;
  for_each([&](int i) { out.push_back(i); });
  return out;
}

int SimplicialComplex::id_of(const std::vector<int>& sorted_vertices) const {
  auto it = index_.find(sorted_vertices);
  return it == index_.end() ? -1 : it->second;
}

SimplexSet SimplicialComplex::full_set() const {
  SimplexSet s(size());
  for (int i = 0; i < size(); ++i) s.set(i);
  return s;
}

std::string SimplicialComplex::label(int id) const {
  std::ostringstream os;
  os << '(';
  const auto& vs = simplices_[id];
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) os << ' ';
    os << vs[i];
  }
  os << ')';
  return os.str();
}

SimplicialComplex build_complex(const std::vector<std::vector<int>>& raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyInput, "no simplices given");

  std::set<std::vector<int>> seen_raw;
  std::set<std::vector<int>> all;
  for (auto s : raw) {
    if (s.empty()) throw Error(ErrorCode::BadInput, "empty vertex tuple");
    std::sort(s.begin(), s.end());
    for (int v : s)
      if (v < 0) throw Error(ErrorCode::BadInput, "negative vertex id");
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error(ErrorCode::BadInput, "repeated vertex within a simplex");
    if (!seen_raw.insert(s).second)
      throw Error(ErrorCode::DuplicateSimplex, "simplex listed twice in input");
    // all faces, by subset enumeration of the vertex tuple
    int k = int(s.size());
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<int> face;
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) face.push_back(s[i]);
      all.insert(std::move(face));
    }
  }

  SimplicialComplex K;
  K.simplices_.assign(all.begin(), all.end());
  std::stable_sort(K.simplices_.begin(), K.simplices_.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a < b;
                   });
  int n = int(K.simplices_.size());
  for (int i = 0; i < n; ++i) {
    K.index_[K.simplices_[i]] = i;
    K.top_dim_ = std::max(K.top_dim_, int(K.simplices_[i].size()) - 1);
  }

  K.faces_.resize(n);
  K.cofaces_.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto& vs = K.simplices_[i];
    if (vs.size() == 1) continue;
    for (size_t drop = 0; drop < vs.size(); ++drop) {
      std::vector<int> face;
      face.reserve(vs.size() - 1);
      for (size_t j = 0; j < vs.size(); ++j)
        if (j != drop) face.push_back(vs[j]);
      int f = K.index_.at(face);
      K.faces_[i].push_back(f);
      K.cofaces_[f].push_back(i);
    }
    std::sort(K.faces_[i].begin(), K.faces_[i].end());
  }
  for (int i = 0; i < n; ++i)
    std::sort(K.cofaces_[i].begin(), K.cofaces_[i].end());

  // Ids are sorted by dimension, so one ascending pass settles closures and
  // one descending pass settles stars.
  K.closure_bits_.assign(n, SimplexSet(n));
  K.star_bits_.assign(n, SimplexSet(n));
  for (int i = 0; i < n; ++i) {
    K.closure_bits_[i].set(i);
    for (int f : K.faces_[i]) K.closure_bits_[i] |= K.closure_bits_[f];
  }
  for (int i = n - 1; i >= 0; --i) {
    K.star_bits_[i].set(i);
    for (int c : K.cofaces_[i]) K.star_bits_[i] |= K.star_bits_[c];
  }
  return K;
}

SimplexSet closure(const SimplicialComplex& K, const SimplexSet& A) {
  SimplexSet out(K.size());
  A.for_each([&](int i) { out |= K.closure_of(i); });
  return out;
}

SimplexSet star(const SimplicialComplex& K, const SimplexSet& A) {
  SimplexSet out(K.size());
  A.for_each([&](int i) { out |= K.star_of(i); });
  return out;
}

SimplexSet mouth(const SimplicialComplex& K, const SimplexSet& A) {
  return closure(K, A) - A;
}

bool is_closed(const SimplicialComplex& K, const SimplexSet& A) {
  return closure(K, A) == A;
}

bool is_convex(const SimplicialComplex& K, const SimplexSet& A) {
  SimplexSet between = closure(K, A);
  between &= star(K, A);
  return A.contains(between);
}

SimplexSet make_set(const SimplicialComplex& K, const std::vector<int>& ids) {
  SimplexSet s(K.size());
  for (int i : ids) s.set(i);
  return s;
}

SimplexSet set_from_simplices(const SimplicialComplex& K,
                              const std::vector<std::vector<int>>& simplices) {
  SimplexSet s(K.size());
  for (auto t : simplices) {
    std::sort(t.begin(), t.end());
    int id = K.id_of(t);
    if (id < 0) throw Error(ErrorCode::BadInput, "unknown simplex in set");
    s.set(id);
  }
  return s;
}

}  // namespace cmg
