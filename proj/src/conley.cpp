#include "cmg/conley.hpp"

#include <algorithm>

namespace cmg {

namespace {

SimplexSet big_fv(const MultivectorField& f, const SimplexSet& A) {
  SimplexSet out(f.complex().size());
  A.for_each([&](int s) { out |= fv(f, s); });
  return out;
}

// forward reachability within N, seeds included
SimplexSet reach_in(const MultivectorField& f, const SimplexSet& N, const SimplexSet& seeds) {
  DynDigraph G{&f, N};
  SimplexSet seen = seeds;
  seen &= N;
  std::vector<int> queue = seen.ids();
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    G.succ(v).for_each([&](int w) {
      if (!seen.test(w)) {
        seen.set(w);
        queue.push_back(w);
      }
    });
  }
  return seen;
}

// leq by reachability (i ≤ j when j reaches i in N), plus the cover edges.
// Throws when the relation has a two-sided pair.
void order_decomposition(const MultivectorField& f, MorseDecomposition& d) {
  int m = int(d.sets.size());
  d.leq.assign(m, std::vector<char>(m, 0));
  std::vector<SimplexSet> fwd;
  fwd.reserve(m);
  for (int i = 0; i < m; ++i) fwd.push_back(reach_in(f, d.N, d.sets[i]));
  for (int i = 0; i < m; ++i) {
    d.leq[i][i] = 1;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (fwd[j].intersects(d.sets[i])) d.leq[i][j] = 1;  // j reaches i, so i ≤ j
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (d.leq[i][j] && d.leq[j][i])
        throw Error(ErrorCode::ValidationFailed, "reachability order has a cycle",
                    {d.sets[i].first(), d.sets[j].first()});

  // covers: i < j with no k strictly between
  d.cover_edges.clear();
  for (int upper = 0; upper < m; ++upper)
    for (int lower = 0; lower < m; ++lower) {
      if (upper == lower || !d.leq[lower][upper]) continue;
      bool direct = true;
      for (int k = 0; k < m && direct; ++k) {
        if (k == upper || k == lower) continue;
        if (d.leq[lower][k] && d.leq[k][upper]) direct = false;
      }
      if (direct) d.cover_edges.emplace_back(upper, lower);
    }
  std::sort(d.cover_edges.begin(), d.cover_edges.end());
}

}  // namespace

std::vector<int> ConleyIndex::poincare() const {
  std::vector<int> out;
  for (const auto& [k, r] : betti) {
    if (int(out.size()) <= k) out.resize(k + 1, 0);
    out[k] = r;
  }
  return out;
}

bool ConleyMorseGraph::has_edge(int u, int v) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end();
}

MorseDecomposition minimal_morse_decomposition(const MultivectorField& f, const SimplexSet& N) {
  if (!is_closed(f.complex(), N)) throw Error(ErrorCode::NotClosed, "N not closed");
  MorseDecomposition d;
  d.N = N;
  SimplexSet inv = invariant_part(f, N);
  for (EssentialScc& c : essential_sccs(f, inv)) d.sets.push_back(std::move(c.members));

  for (const SimplexSet& M : d.sets) {
    IsolationResult chk = is_isolated(f, N, M);
    if (!chk.isolated)
      throw Error(ErrorCode::ValidationFailed,
                  "Morse set fails isolation, clause " + std::to_string(chk.failed_clause),
                  chk.witness);
  }

  order_decomposition(f, d);
  return d;
}

MorseDecomposition assemble_morse_decomposition(const MultivectorField& f, const SimplexSet& N,
                                                const std::vector<SimplexSet>& sets) {
  const SimplicialComplex& K = f.complex();
  if (!is_closed(K, N)) throw Error(ErrorCode::NotClosed, "N not closed");
  SimplexSet used(K.size());
  for (const SimplexSet& M : sets) {
    if (M.empty()) throw Error(ErrorCode::BadInput, "empty Morse set");
    if (!N.contains(M))
      throw Error(ErrorCode::NotContained, "Morse set leaves N", {(M - N).first()});
    if (used.intersects(M))
      throw Error(ErrorCode::BadInput, "Morse sets overlap", {(used & M).first()});
    used |= M;
    if (invariant_part(f, M) != M)
      throw Error(ErrorCode::NotInvariant, "Morse set not invariant",
                  {(M - invariant_part(f, M)).first()});
    IsolationResult chk = is_isolated(f, N, M);
    if (!chk.isolated)
      throw Error(ErrorCode::NotIsolated,
                  "Morse set fails isolation, clause " + std::to_string(chk.failed_clause),
                  chk.witness);
  }
  // every essential component of inv(N) must be swallowed by one of the sets,
  // otherwise recurrent behavior escapes the decomposition
  SimplexSet inv = invariant_part(f, N);
  for (const EssentialScc& c : essential_sccs(f, inv)) {
    bool covered = false;
    for (const SimplexSet& M : sets)
      if (M.contains(c.members)) {
        covered = true;
        break;
      }
    if (!covered)
      throw Error(ErrorCode::ValidationFailed, "essential component not covered by any set",
                  {c.members.first()});
  }

  MorseDecomposition d;
  d.N = N;
  d.sets = sets;
  order_decomposition(f, d);
  return d;
}

IndexPairReport validate_index_pair(const IndexPair& ip) {
  const MultivectorField& f = *ip.field;
  const SimplicialComplex& K = f.complex();
  IndexPairReport rep;

  auto structural_fail = [&](int witness) {
    rep.structural_ok = false;
    if (witness >= 0) rep.structural_witness.push_back(witness);
  };
  if (!is_closed(K, ip.P)) structural_fail((mouth(K, ip.P)).first());
  if (!is_closed(K, ip.E)) structural_fail((mouth(K, ip.E)).first());
  if (!ip.P.contains(ip.E)) structural_fail((ip.E - ip.P).first());
  if (ip.kind == IndexPair::Kind::InN && !ip.N.contains(ip.P))
    structural_fail((ip.P - ip.N).first());

  SimplexSet interior = ip.interior();
  auto check = [&](const SimplexSet& source, const SimplexSet& clip, const SimplexSet& target) {
    IndexPairReport::Clause c;
    SimplexSet image = big_fv(f, source);
    image &= clip;
    image -= target;
    if (!image.empty()) {
      c.pass = false;
      int esc = image.first();
      // also report a source simplex mapping onto the escapee
      int src = -1;
      source.for_each([&](int s) {
        if (src < 0 && fv(f, s).test(esc)) src = s;
      });
      c.witness = {src, esc};
    }
    return c;
  };

  SimplexSet everything = K.full_set();
  if (ip.kind == IndexPair::Kind::Plain) {
    rep.clauses.push_back(check(ip.E, ip.P, ip.E));
    rep.clauses.push_back(check(interior, everything, ip.P));
  } else {
    rep.clauses.push_back(check(ip.E, ip.N, ip.E));
    rep.clauses.push_back(check(ip.P, ip.N, ip.P));
    rep.clauses.push_back(check(interior, everything, ip.N));
  }
  rep.invariant = invariant_part(f, interior);
  return rep;
}

IndexPair index_pair_pf(const MultivectorField& f, const SimplexSet& N, const SimplexSet& S) {
  IsolationResult chk = is_isolated(f, N, S);
  if (!chk.isolated)
    throw Error(ErrorCode::NotIsolated,
                "S is not isolated in N, clause " + std::to_string(chk.failed_clause),
                chk.witness);
  const SimplicialComplex& K = f.complex();
  IndexPair ip;
  ip.P = push_forward(f, N, closure(K, S));
  ip.E = push_forward(f, N, mouth(K, S));
  ip.N = N;
  ip.kind = IndexPair::Kind::InN;
  ip.field = &f;

  IndexPairReport rep = validate_index_pair(ip);
  if (!rep.pass() || rep.invariant != S)
    throw Error(ErrorCode::ValidationFailed, "push-forward pair failed validation");
  return ip;
}

IndexPair intersect_index_pairs(const IndexPair& a, const IndexPair& b,
                                const MultivectorField& intersection_field) {
  if (a.N != b.N) throw Error(ErrorCode::DifferentN, "pairs have different isolating sets");
  if (&a.field->complex() != &b.field->complex())
    throw Error(ErrorCode::DifferentComplex, "pairs live on different complexes");
  IndexPair out;
  out.P = a.P & b.P;
  out.E = a.E & b.E;
  out.N = a.N;
  out.kind = IndexPair::Kind::InN;
  out.field = &intersection_field;
  IndexPairReport rep = validate_index_pair(out);
  if (!rep.pass())
    throw Error(ErrorCode::ValidationFailed, "intersection failed index pair validation");
  return out;
}

IntersectedPair intersect_index_pairs(const IndexPair& a, const IndexPair& b) {
  auto field = std::make_shared<MultivectorField>(intersect_fields(*a.field, *b.field));
  IndexPair pair = intersect_index_pairs(a, b, *field);
  return {std::move(field), std::move(pair)};
}

IndexPair restrict_index_pair(const IndexPair& ip, const SimplexSet& Nprime) {
  const SimplicialComplex& K = ip.field->complex();
  if (!is_closed(K, Nprime)) throw Error(ErrorCode::NotClosed, "N' not closed");
  if (!ip.N.contains(Nprime)) throw Error(ErrorCode::NotContained, "N' not within N");
  SimplexSet interior = ip.interior();
  if (!Nprime.contains(interior))
    throw Error(ErrorCode::InteriorEscapes, "P minus E leaves N'",
                {(interior - Nprime).first()});

  IndexPair out;
  out.P = ip.P & Nprime;
  out.E = ip.E & Nprime;
  out.N = Nprime;
  out.kind = IndexPair::Kind::InN;
  out.field = ip.field;

  IndexPairReport rep = validate_index_pair(out);
  if (!rep.pass() || rep.invariant != invariant_part(*ip.field, interior))
    throw Error(ErrorCode::ValidationFailed, "restriction failed validation");
  return out;
}

IndexPair thicken_index_pair(const MultivectorField& f, const IndexPair& ip,
                             const MorseDecomposition& decomposition, int rounds) {
  const SimplicialComplex& K = f.complex();
  SimplexSet S = invariant_part(f, ip.interior());
  SimplexSet forbidden(K.size());
  for (const SimplexSet& M : decomposition.sets)
    if (!S.contains(M)) forbidden |= M;

  IndexPair out = ip;
  for (int round = 0; round < rounds; ++round) {
    SimplexSet start = out.P;
    bool grew = false;
    for (int v = 0; v < f.num_vectors(); ++v) {
      const SimplexSet& V = f.vector(v);
      if (out.P.contains(V)) continue;
      if (!out.N.contains(V)) continue;
      if (V.intersects(out.E)) continue;
      if (V.intersects(forbidden)) continue;
      if (!start.contains(mouth(K, V))) continue;
      out.P |= V;
      grew = true;
    }
    if (!grew) break;
  }

  IndexPairReport rep = validate_index_pair(out);
  if (!rep.pass())
    throw Error(ErrorCode::ValidationFailed, "thickened pair failed validation");
  if (rep.invariant != S)
    throw Error(ErrorCode::InvariantChanged, "thickening absorbed a Morse set",
                {(rep.invariant - S).first()});
  return out;
}

ConleyIndex conley_index(const IndexPair& ip, int p) {
  PairHomology ph(ip.field->complex(), ip.P, ip.E, p);
  return ConleyIndex{ph.betti_map()};
}

ConleyIndex conley_index(const IndexPair& ip) {
  return conley_index(ip, ip.field->characteristic());
}

ConleyMorseGraph conley_morse_graph(const MultivectorField& f, const SimplexSet& N,
                                    const MorseDecomposition& decomposition) {
  ConleyMorseGraph g;
  int m = int(decomposition.sets.size());
  for (int i = 0; i < m; ++i) {
    IndexPair ip = index_pair_pf(f, N, decomposition.sets[i]);
    g.poincare.push_back(conley_index(ip).poincare());
  }
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      if (u == v) continue;
      if (direct_connection(f, N, decomposition.sets, u, v)) g.edges.emplace_back(u, v);
    }
  return g;
}

}  // namespace cmg
