#include "cmg/zigzag.hpp"

#include <algorithm>

namespace cmg {

void validate_module(const ZigzagModule& m) {
  int L = m.positions();
  if (L % 2 == 0) throw Error(ErrorCode::BadInput, "module needs an odd position count");
  int nj = (L - 1) / 2;
  if (m.junctions() != nj || int(m.right.size()) != nj)
    throw Error(ErrorCode::BadInput, "junction count mismatch");
  for (int j = 0; j < nj; ++j) {
    if (m.left[j].rows != m.dims[2 * j] || m.left[j].cols != m.dims[2 * j + 1] ||
        m.right[j].rows != m.dims[2 * j + 2] || m.right[j].cols != m.dims[2 * j + 1])
      throw Error(ErrorCode::BadInput, "arrow shape mismatch at junction " + std::to_string(j));
  }
}

std::vector<ZigzagModule> build_relative_zigzag(const SimplicialComplex& K,
                                                const std::vector<IndexPair>& pairs,
                                                const std::vector<IndexPair>& gap_pairs,
                                                int p) {
  int n = int(pairs.size());
  if (n == 0) throw Error(ErrorCode::EmptyInput, "no index pairs");
  if (int(gap_pairs.size()) != n - 1)
    throw Error(ErrorCode::BadInput, "need one junction pair per gap");

  std::vector<PairHomology> slots;
  slots.reserve(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    slots.emplace_back(K, pairs[i].P, pairs[i].E, p);
    if (i + 1 < n) slots.emplace_back(K, gap_pairs[i].P, gap_pairs[i].E, p);
  }

  std::vector<ZigzagModule> modules;
  for (int k = 0; k <= K.top_dim(); ++k) {
    ZigzagModule m;
    m.p = p;
    m.homology_dim = k;
    for (const PairHomology& s : slots) m.dims.push_back(s.betti(k));
    for (int j = 0; j + 1 < n; ++j) {
      const PairHomology& junction = slots[2 * j + 1];
      m.left.push_back(induced_inclusion_map(K, junction, slots[2 * j], k));
      m.right.push_back(induced_inclusion_map(K, junction, slots[2 * j + 2], k));
    }
    validate_module(m);
    modules.push_back(std::move(m));
  }
  return modules;
}

RelativeZigzag build_relative_zigzag(const SimplicialComplex& K,
                                     const std::vector<IndexPair>& pairs, int p) {
  RelativeZigzag out;
  for (size_t i = 0; i + 1 < pairs.size(); ++i) {
    IntersectedPair gap = intersect_index_pairs(pairs[i], pairs[i + 1]);
    out.gap_fields.push_back(std::move(gap.field));
    out.gap_pairs.push_back(std::move(gap.pair));
  }
  out.modules = build_relative_zigzag(K, pairs, out.gap_pairs, p);
  return out;
}

std::vector<ZigzagModule> build_graph_zigzag(const std::vector<GraphSlot>& slots, int p) {
  int L = int(slots.size());
  if (L == 0 || L % 2 == 0)
    throw Error(ErrorCode::BadInput, "graph tower needs an odd slot count");

  // per-slot absolute homology; empty slots contribute zero spaces
  std::vector<std::unique_ptr<PairHomology>> hom(L);
  for (int i = 0; i < L; ++i)
    if (slots[i].complex)
      hom[i] = std::make_unique<PairHomology>(*slots[i].complex, slots[i].complex->full_set(),
                                              slots[i].complex->empty_set(), p);

  std::vector<ZigzagModule> modules;
  for (int k = 0; k <= 1; ++k) {
    ZigzagModule m;
    m.p = p;
    m.homology_dim = k;
    for (int i = 0; i < L; ++i) m.dims.push_back(hom[i] ? hom[i]->betti(k) : 0);
    for (int j = 0; 2 * j + 2 < L + 1; ++j) {
      int e = 2 * j + 1;  // 0-based index of the junction slot
      auto arrow = [&](int target, const std::map<int, int>& vmap) {
        if (!slots[e].complex || !slots[target].complex)
          return FieldMatrix(m.dims[target], m.dims[e], p);
        return induced_simplicial_map(*slots[e].complex, *slots[target].complex, vmap, k, p);
      };
      m.left.push_back(arrow(e - 1, slots[e].to_left));
      m.right.push_back(arrow(e + 1, slots[e].to_right));
    }
    validate_module(m);
    modules.push_back(std::move(m));
  }
  return modules;
}

int generalized_rank(const ZigzagModule& m, int i, int j) {
  int L = m.positions();
  std::vector<int> offset(j - i + 1, 0);
  int total = 0;
  for (int pos = i; pos <= j; ++pos) {
    offset[pos - i] = total;
    total += m.dim_at(pos);
  }
  auto off = [&](int pos) { return offset[pos - i]; };

  struct Arrow {
    int src, dst;             // global positions
    const FieldMatrix* map;
  };
  std::vector<Arrow> arrows;
  for (int e = i; e <= j; ++e) {
    if (e % 2 != 0) continue;
    int junction = (e - 2) / 2;
    if (e - 1 >= i) arrows.push_back({e, e - 1, &m.left[junction]});
    if (e + 1 <= j) arrows.push_back({e, e + 1, &m.right[junction]});
  }

  // limit: tuples (x_pos) with map(x_src) = x_dst for every in-window arrow
  int crows = 0;
  for (const Arrow& a : arrows) crows += m.dim_at(a.dst);
  FieldMatrix constraints(crows, total, m.p);
  int row = 0;
  for (const Arrow& a : arrows) {
    int ds = m.dim_at(a.src), dd = m.dim_at(a.dst);
    for (int r = 0; r < dd; ++r) {
      constraints.at(row + r, off(a.dst) + r) = m.p - 1;
      for (int c = 0; c < ds; ++c) constraints.at(row + r, off(a.src) + c) = a.map->at(r, c);
    }
    row += dd;
  }
  FieldMatrix lim = kernel_basis(constraints);

  // colimit: quotient of the direct sum by in-window arrow relations; the
  // canonical map sends a limit tuple to the class of any one slot
  int relcols = 0;
  for (const Arrow& a : arrows) relcols += m.dim_at(a.src);
  FieldMatrix combined(total, relcols + lim.cols, m.p);
  int col = 0;
  for (const Arrow& a : arrows) {
    int ds = m.dim_at(a.src), dd = m.dim_at(a.dst);
    for (int c = 0; c < ds; ++c) {
      combined.at(off(a.src) + c, col) = 1;
      for (int r = 0; r < dd; ++r)
        combined.at(off(a.dst) + r, col) = normalize_mod(-(long long)a.map->at(r, c), m.p);
      ++col;
    }
  }
  for (int c = 0; c < lim.cols; ++c)
    for (int r = 0; r < m.dim_at(i); ++r) combined.at(off(i) + r, relcols + c) = lim.at(r, c);

  FieldMatrix relations(total, relcols, m.p);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < relcols; ++c) relations.at(r, c) = combined.at(r, c);

  return rank(std::move(combined)) - rank(std::move(relations));
}

std::vector<Bar> interval_decompose(const ZigzagModule& m) {
  validate_module(m);
  int L = m.positions();
  std::vector<std::vector<int>> rk(L + 2, std::vector<int>(L + 2, 0));
  for (int i = 1; i <= L; ++i)
    for (int j = i; j <= L; ++j) rk[i][j] = generalized_rank(m, i, j);

  std::vector<Bar> bars;
  for (int i = 1; i <= L; ++i)
    for (int j = i; j <= L; ++j) {
      int mult = rk[i][j] - (i > 1 ? rk[i - 1][j] : 0) - (j < L ? rk[i][j + 1] : 0) +
                 (i > 1 && j < L ? rk[i - 1][j + 1] : 0);
      if (mult < 0)
        throw Error(ErrorCode::ValidationFailed,
                    "negative interval multiplicity at [" + std::to_string(i) + "," +
                        std::to_string(j) + "]");
      for (int c = 0; c < mult; ++c) {
        Bar b;
        b.dim = m.homology_dim;
        b.birth = i;
        b.death = j;
        b.birth_open = (i % 2 == 0);
        b.death_open = (j % 2 == 0);
        bars.push_back(b);
      }
    }
  std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
    return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
  });
  return bars;
}

AuditReport audit_barcode(const ZigzagModule& m, const std::vector<Bar>& bars) {
  AuditReport rep;
  auto fail = [&](std::string msg) {
    rep.pass = false;
    rep.failures.push_back(std::move(msg));
  };

  for (int pos = 1; pos <= m.positions(); ++pos) {
    int covered = 0;
    for (const Bar& b : bars) covered += b.covers(pos);
    if (covered != m.dim_at(pos))
      fail("coverage mismatch at position " + std::to_string(pos) + ": " +
           std::to_string(covered) + " bars vs dim " + std::to_string(m.dim_at(pos)));
  }

  // every arrow is a maximal composable run under the outward orientation,
  // so the run bound coincides with the arrow rank rule
  for (int j = 0; j < m.junctions(); ++j) {
    int e = 2 * j + 2;
    auto spanning = [&](int a, int b) {
      int c = 0;
      for (const Bar& bar : bars) c += bar.covers(a) && bar.covers(b);
      return c;
    };
    int rl = rank(m.left[j]), rr = rank(m.right[j]);
    if (spanning(e - 1, e) != rl)
      fail("left arrow at junction position " + std::to_string(e) + ": " +
           std::to_string(spanning(e - 1, e)) + " spanning bars vs rank " + std::to_string(rl));
    if (spanning(e, e + 1) != rr)
      fail("right arrow at junction position " + std::to_string(e) + ": " +
           std::to_string(spanning(e, e + 1)) + " spanning bars vs rank " + std::to_string(rr));
    if (spanning(e - 1, e) > rl || spanning(e, e + 1) > rr)
      fail("composable run bound violated at position " + std::to_string(e));
  }
  return rep;
}

}  // namespace cmg
