#include "cmg/linalg.hpp"

#include <algorithm>

namespace cmg {

int normalize_mod(long long x, int p) {
  long long r = x % p;
  if (r < 0) r += p;
  return int(r);
}

int inverse_mod(int a, int p) {
  // extended Euclid; p prime, a != 0 mod p
  int t = 0, newt = 1, r = p, newr = normalize_mod(a, p);
  while (newr != 0) {
    int q = r / newr;
    int tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw Error(ErrorCode::BadInput, "not invertible: gcd != 1");
  return normalize_mod(t, p);
}

FieldMatrix FieldMatrix::identity(int n, int p) {
  FieldMatrix m(n, n, p);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FieldMatrix matmul(const FieldMatrix& A, const FieldMatrix& B) {
  if (A.cols != B.rows || A.p != B.p)
    throw Error(ErrorCode::BadInput, "matmul shape/field mismatch");
  FieldMatrix C(A.rows, B.cols, A.p);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      int aik = A.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = normalize_mod(C.at(i, j) + (long long)aik * B.at(k, j), A.p);
    }
  return C;
}

namespace {

// Row echelon over F_p; returns rank, optionally records pivot columns.
int echelonize(FieldMatrix& M, std::vector<int>* pivot_cols = nullptr) {
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int pr = -1;
    for (int i = r; i < M.rows; ++i)
      if (M.at(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(pr, j), M.at(r, j));
    int inv = inverse_mod(M.at(r, c), M.p);
    for (int j = 0; j < M.cols; ++j)
      M.at(r, j) = normalize_mod((long long)M.at(r, j) * inv, M.p);
    for (int i = 0; i < M.rows; ++i) {
      if (i == r) continue;
      int f = M.at(i, c);
      if (!f) continue;
      for (int j = 0; j < M.cols; ++j)
        M.at(i, j) = normalize_mod(M.at(i, j) - (long long)f * M.at(r, j), M.p);
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

}  // namespace

int rank(FieldMatrix M) { return echelonize(M); }

FieldMatrix kernel_basis(const FieldMatrix& M) {
  FieldMatrix R = M;
  std::vector<int> pivots;
  int r = echelonize(R, &pivots);
  std::vector<char> is_pivot(M.cols, 0);
  for (int c : pivots) is_pivot[c] = 1;
  FieldMatrix K(M.cols, M.cols - r, M.p);
  int kc = 0;
  for (int c = 0; c < M.cols; ++c) {
    if (is_pivot[c]) continue;
    K.at(c, kc) = 1;
    // pivot row i has its pivot at pivots[i]; entry in column c gives the
    // dependence to cancel
    for (int i = 0; i < r; ++i)
      K.at(pivots[i], kc) = normalize_mod(-(long long)R.at(i, c), M.p);
    ++kc;
  }
  return K;
}

PairHomology::PairHomology(const SimplicialComplex& K, const SimplexSet& P,
                           const SimplexSet& E, int p)
    : P_(P), E_(E), p_(p) {
  if (!is_closed(K, P)) throw Error(ErrorCode::NotClosed, "P not closed");
  if (!is_closed(K, E)) throw Error(ErrorCode::NotClosed, "E not closed");
  if (!P.contains(E)) throw Error(ErrorCode::NotNested, "E not contained in P");

  cells_ = (P - E).ids();
  int m = int(cells_.size());
  local_.assign(K.size(), -1);
  dims_.resize(m);
  for (int i = 0; i < m; ++i) {
    local_[cells_[i]] = i;
    dims_[i] = K.dim_of(cells_[i]);
  }

  // Quotient boundary: faces in E vanish; faces outside P cannot occur
  // because P is closed.
  R_.assign(m, std::vector<int>(m, 0));
  V_.assign(m, std::vector<int>(m, 0));
  for (int j = 0; j < m; ++j) {
    V_[j][j] = 1;
    const auto& verts = K.vertices_of(cells_[j]);
    if (verts.size() == 1) continue;
    std::vector<int> face(verts.size() - 1);
    for (size_t drop = 0; drop < verts.size(); ++drop) {
      int w = 0;
      for (size_t q = 0; q < verts.size(); ++q)
        if (q != drop) face[w++] = verts[q];
      int fid = K.id_of(face);
      int l = local_[fid];
      if (l < 0) continue;
      int sign = (drop % 2 == 0) ? 1 : p_ - 1;
      R_[j][l] = normalize_mod(R_[j][l] + sign, p_);
    }
  }

  low_.assign(m, -1);
  pivot_of_row_.assign(m, -1);
  auto column_low = [&](const std::vector<int>& col) {
    for (int i = int(col.size()) - 1; i >= 0; --i)
      if (col[i]) return i;
    return -1;
  };
  for (int j = 0; j < m; ++j) {
    int l = column_low(R_[j]);
    while (l >= 0) {
      int j2 = pivot_of_row_[l];
      if (j2 < 0) {
        pivot_of_row_[l] = j;
        break;
      }
      long long c = (long long)R_[j][l] * inverse_mod(R_[j2][l], p_);
      for (int i = 0; i <= l; ++i) R_[j][i] = normalize_mod(R_[j][i] - c * R_[j2][i], p_);
      // V accumulates column operations over the full index range
      for (int i = 0; i < m; ++i) V_[j][i] = normalize_mod(V_[j][i] - c * V_[j2][i], p_);
      l = column_low(R_[j]);
    }
    low_[j] = l;
  }

  for (int j = 0; j < m; ++j)
    if (low_[j] < 0 && pivot_of_row_[j] < 0) basis_cols_[dims_[j]].push_back(j);
}

int PairHomology::betti(int k) const {
  auto it = basis_cols_.find(k);
  return it == basis_cols_.end() ? 0 : int(it->second.size());
}

std::map<int, int> PairHomology::betti_map() const {
  std::map<int, int> out;
  for (const auto& [k, cols] : basis_cols_)
    if (!cols.empty()) out[k] = int(cols.size());
  return out;
}

const std::vector<int>& PairHomology::basis_columns(int k) const {
  static const std::vector<int> kEmpty;
  auto it = basis_cols_.find(k);
  return it == basis_cols_.end() ? kEmpty : it->second;
}

std::vector<int> PairHomology::basis_vector(int k, int j) const {
  return V_[basis_columns(k).at(j)];
}

Chain PairHomology::basis_chain(int k, int j) const {
  Chain out;
  std::vector<int> v = basis_vector(k, j);
  for (int i = 0; i < int(v.size()); ++i)
    if (v[i]) out.emplace_back(cells_[i], v[i]);
  return out;
}

std::vector<int> PairHomology::coords_of(int k, std::vector<int> z) const {
  const auto& cols = basis_columns(k);
  std::vector<int> coords(cols.size(), 0);
  auto column_low = [](const std::vector<int>& col) {
    for (int i = int(col.size()) - 1; i >= 0; --i)
      if (col[i]) return i;
    return -1;
  };
  int l = column_low(z);
  while (l >= 0) {
    int j2 = pivot_of_row_[l];
    if (j2 >= 0) {
      // subtract the boundary with this low; homology class unchanged
      long long c = (long long)z[l] * inverse_mod(R_[j2][l], p_);
      for (int i = 0; i <= l; ++i) z[i] = normalize_mod(z[i] - c * R_[j2][i], p_);
    } else if (low_[l] < 0) {
      // unpaired zero column: a basis class (V has unit diagonal)
      auto it = std::find(cols.begin(), cols.end(), l);
      if (it == cols.end())
        throw Error(ErrorCode::BadInput, "cycle mixes dimensions", {cells_[l]});
      coords[it - cols.begin()] = z[l];
      int c = z[l];
      for (int i = 0; i <= l; ++i)
        z[i] = normalize_mod(z[i] - (long long)c * V_[l][i], p_);
    } else {
      throw Error(ErrorCode::BadInput, "not a relative cycle", {cells_[l]});
    }
    l = column_low(z);
  }
  return coords;
}

HomologySummary relative_homology(const SimplicialComplex& K, const SimplexSet& P,
                                  const SimplexSet& E, int p) {
  PairHomology ph(K, P, E, p);
  HomologySummary out;
  out.betti = ph.betti_map();
  for (const auto& [k, n] : out.betti)
    for (int j = 0; j < n; ++j) out.basis[k].push_back(ph.basis_chain(k, j));
  return out;
}

FieldMatrix induced_inclusion_map(const SimplicialComplex& K, const PairHomology& sub,
                                  const PairHomology& sup, int k) {
  if (!sup.P().contains(sub.P()) || !sup.E().contains(sub.E()))
    throw Error(ErrorCode::NotSubpair, "pair containment fails");
  if (sub.characteristic() != sup.characteristic())
    throw Error(ErrorCode::BadInput, "characteristic mismatch");
  int nc = sub.betti(k), nr = sup.betti(k);
  FieldMatrix M(nr, nc, sub.characteristic());
  for (int j = 0; j < nc; ++j) {
    std::vector<int> v = sub.basis_vector(k, j);
    std::vector<int> w(sup.num_cells(), 0);
    for (int i = 0; i < int(v.size()); ++i) {
      if (!v[i]) continue;
      int l = sup.local_of(sub.cell_id(i));
      if (l >= 0) w[l] = v[i];  // cells absorbed into the larger E vanish
    }
    std::vector<int> coords = sup.coords_of(k, std::move(w));
    for (int i = 0; i < nr; ++i) M.at(i, j) = coords[i];
  }
  return M;
}

FieldMatrix induced_inclusion_map(const SimplicialComplex& K, const SimplexSet& Psub,
                                  const SimplexSet& Esub, const SimplexSet& Psup,
                                  const SimplexSet& Esup, int k, int p) {
  PairHomology sub(K, Psub, Esub, p), sup(K, Psup, Esup, p);
  return induced_inclusion_map(K, sub, sup, k);
}

FieldMatrix induced_simplicial_map(const SimplicialComplex& K, const SimplicialComplex& L,
                                   const std::map<int, int>& vertex_map, int k, int p) {
  // image of every simplex must exist in L, not just those on basis cycles
  for (int s = 0; s < K.size(); ++s) {
    std::vector<int> img;
    for (int v : K.vertices_of(s)) {
      auto it = vertex_map.find(v);
      if (it == vertex_map.end())
        throw Error(ErrorCode::BadInput, "vertex missing from map", {s});
      img.push_back(it->second);
    }
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    if (L.id_of(img) < 0)
      throw Error(ErrorCode::NotSimplicial, "simplex image absent from target", {s});
  }

  PairHomology src(K, K.full_set(), K.empty_set(), p);
  PairHomology dst(L, L.full_set(), L.empty_set(), p);
  int nc = src.betti(k), nr = dst.betti(k);
  FieldMatrix M(nr, nc, p);
  for (int j = 0; j < nc; ++j) {
    std::vector<int> v = src.basis_vector(k, j);
    std::vector<int> w(dst.num_cells(), 0);
    for (int i = 0; i < int(v.size()); ++i) {
      if (!v[i]) continue;
      std::vector<int> img;
      for (int vid : K.vertices_of(src.cell_id(i))) img.push_back(vertex_map.at(vid));
      // collapse to zero when vertices merge; otherwise sort and track the
      // permutation sign
      std::vector<int> sorted = img;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      int inversions = 0;
      for (size_t a = 0; a < img.size(); ++a)
        for (size_t b = a + 1; b < img.size(); ++b)
          if (img[a] > img[b]) ++inversions;
      int sign = (inversions % 2 == 0) ? 1 : p - 1;
      int tgt = dst.local_of(L.id_of(sorted));
      w[tgt] = normalize_mod(w[tgt] + (long long)sign * v[i], p);
    }
    std::vector<int> coords = dst.coords_of(k, std::move(w));
    for (int i = 0; i < nr; ++i) M.at(i, j) = coords[i];
  }
  return M;
}

}  // namespace cmg
