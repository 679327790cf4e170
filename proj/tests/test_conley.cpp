#include <algorithm>
#include <deque>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace cmg;

namespace {

// strong connectivity of the dynamics restricted to M
bool strongly_connected(const MultivectorField& f, const SimplexSet& M) {
  if (M.empty()) return false;
  DynDigraph G{&f, M};
  for (int dir = 0; dir < 2; ++dir) {
    SimplexSet seen(M.universe_size());
    seen.set(M.first());
    std::deque<int> queue{M.first()};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      SimplexSet nxt = dir == 0 ? G.succ(v) : G.preds(v);
      nxt.for_each([&](int w) {
        if (!seen.test(w)) {
          seen.set(w);
          queue.push_back(w);
        }
      });
    }
    if (seen != M) return false;
  }
  return true;
}

IndexPair plain_pair(const MultivectorField& f, const SimplexSet& S) {
  IndexPair ip;
  ip.P = closure(f.complex(), S);
  ip.E = mouth(f.complex(), S);
  ip.N = f.complex().full_set();
  ip.kind = IndexPair::Kind::Plain;
  ip.field = &f;
  return ip;
}

void check_order_sane(const MorseDecomposition& d) {
  int m = int(d.sets.size());
  for (int i = 0; i < m; ++i) {
    CHECK(d.leq[i][i]);
    for (int j = 0; j < m; ++j) {
      if (i != j) CHECK(!(d.leq[i][j] && d.leq[j][i]));
      for (int k = 0; k < m; ++k)
        if (d.leq[i][j] && d.leq[j][k]) CHECK(d.leq[i][k]);
    }
  }
  // cover edges generate the strict order
  std::vector<std::vector<char>> gen(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i) gen[i][i] = 1;
  for (auto [u, l] : d.cover_edges) {
    CHECK(d.leq[l][u]);
    CHECK(u != l);
    gen[l][u] = 1;
  }
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (gen[i][k] && gen[k][j]) gen[i][j] = 1;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) CHECK(gen[i][j] == d.leq[i][j]);
}

}  // namespace

TEST_CASE("minimal Morse decompositions of the named fixtures") {
  auto iv = fx::interval();
  auto d = minimal_morse_decomposition(*iv.f, iv.K->full_set());
  REQUIRE(d.sets.size() == 1);
  CHECK(d.sets[0] == fx::named_set(*iv.K, {{1}}));
  CHECK(d.cover_edges.empty());

  auto tr = fx::full_triangle();
  d = minimal_morse_decomposition(*tr.f, tr.K->full_set());
  REQUIRE(d.sets.size() == 2);
  CHECK(d.sets[0] == (tr.K->full_set() - fx::named_set(*tr.K, {{0, 1, 2}})));
  CHECK(d.sets[1] == fx::named_set(*tr.K, {{0, 1, 2}}));
  CHECK(d.leq[0][1]);
  CHECK(!d.leq[1][0]);
  CHECK(d.cover_edges == std::vector<std::pair<int, int>>{{1, 0}});

  auto an = fx::annulus3();
  d = minimal_morse_decomposition(*an.f1, an.N);
  REQUIRE(d.sets.size() == 3);
  CHECK(d.sets[0] == fx::a3_inner_ring(*an.K));
  CHECK(d.sets[1] == fx::a3_star4(*an.K));
  CHECK(d.sets[2] == fx::named_set(*an.K, {{7, 8}}));
  CHECK(d.cover_edges == std::vector<std::pair<int, int>>{{1, 2}, {2, 0}});

  d = minimal_morse_decomposition(*an.f2, an.N);
  REQUIRE(d.sets.size() == 4);
  CHECK(d.sets[0] == fx::a3_inner_ring(*an.K));
  CHECK(d.sets[1] == fx::named_set(*an.K, {{4}}));
  CHECK(d.sets[2] == fx::a3_repel_ring(*an.K));
  CHECK(d.sets[3] == fx::named_set(*an.K, {{7, 8}}));
  CHECK(d.cover_edges == std::vector<std::pair<int, int>>{{2, 1}, {2, 3}, {3, 0}});

  d = minimal_morse_decomposition(*an.f3, an.N);
  REQUIRE(d.sets.size() == 3);
  CHECK(d.sets[0] == fx::a3_semistable(*an.K));
  CHECK(d.sets[1] == fx::named_set(*an.K, {{4}}));
  CHECK(d.sets[2] == fx::named_set(*an.K, {{3, 5}}));
  CHECK(d.cover_edges == std::vector<std::pair<int, int>>{{0, 2}, {2, 1}});
}

TEST_CASE("minimal Morse sets are strongly connected isolated invariant sets") {
  std::mt19937 rng(811);
  for (int it = 0; it < 60; ++it) {
    auto K = fx::random_complex(rng, 28);
    auto f = fx::random_field(rng, K, 30);
    SimplexSet N = K->full_set();
    auto d = minimal_morse_decomposition(*f, N);
    check_order_sane(d);
    SimplexSet all(K->size());
    for (const SimplexSet& M : d.sets) {
      CHECK(strongly_connected(*f, M));
      CHECK(invariant_part(*f, M) == M);
      CHECK(is_isolated(*f, N, M).isolated);
      CHECK(!all.intersects(M));
      all |= M;
    }
    // the sets absorb every recurrent cell
    for (const auto& c : essential_sccs(*f, invariant_part(*f, N))) CHECK(all.contains(c.members));
  }
}

TEST_CASE("push-forward index pairs of the first annulus field") {
  auto an = fx::annulus3();
  const auto& K = *an.K;

  IndexPair ir = index_pair_pf(*an.f1, an.N, fx::a3_inner_ring(K));
  CHECK(ir.P == fx::a3_inner_ring(K));
  CHECK(ir.E.empty());
  CHECK(conley_index(ir).poincare() == std::vector<int>{1, 1});

  IndexPair st4 = index_pair_pf(*an.f1, an.N, fx::a3_star4(K));
  CHECK(st4.P == an.N);  // the repelling star spills onto everything
  CHECK(st4.E == (an.N - fx::a3_star4(K)));
  CHECK(conley_index(st4).poincare() == std::vector<int>{0, 0, 1});

  IndexPair e78 = index_pair_pf(*an.f1, an.N, fx::named_set(K, {{7, 8}}));
  CHECK(e78.P.count() == 15);
  CHECK(e78.E.count() == 14);
  CHECK(e78.interior() == fx::named_set(K, {{7, 8}}));
  CHECK(conley_index(e78).poincare() == std::vector<int>{0, 1});

  std::vector<std::pair<const IndexPair*, SimplexSet>> expected = {
      {&ir, fx::a3_inner_ring(K)}, {&st4, fx::a3_star4(K)}, {&e78, fx::named_set(K, {{7, 8}})}};
  for (auto& [ip, S] : expected) {
    IndexPairReport rep = validate_index_pair(*ip);
    CHECK(rep.pass());
    CHECK(rep.clauses.size() == 3);
    CHECK(rep.invariant == S);
  }
}

TEST_CASE("push-forward index pairs of the second and third annulus fields") {
  auto an = fx::annulus3();
  const auto& K = *an.K;

  IndexPair rep2 = index_pair_pf(*an.f2, an.N, fx::a3_repel_ring(K));
  CHECK(rep2.P == an.N);
  CHECK(rep2.E == (an.N - fx::a3_repel_ring(K)));
  CHECK(conley_index(rep2).poincare() == std::vector<int>{0, 1, 1});

  IndexPair v4 = index_pair_pf(*an.f2, an.N, fx::named_set(K, {{4}}));
  CHECK(v4.P == fx::named_set(K, {{4}}));
  CHECK(v4.E.empty());
  CHECK(conley_index(v4).poincare() == std::vector<int>{1});

  // the stray critical edge gets bitwise-identical pairs under both fields
  IndexPair e78a = index_pair_pf(*an.f1, an.N, fx::named_set(K, {{7, 8}}));
  IndexPair e78b = index_pair_pf(*an.f2, an.N, fx::named_set(K, {{7, 8}}));
  CHECK(e78a.P == e78b.P);
  CHECK(e78a.E == e78b.E);

  SimplexSet X = fx::a3_semistable(K);
  IndexPair xp = index_pair_pf(*an.f3, an.N, X);
  CHECK(xp.P == closure(K, X));
  CHECK(xp.P.count() == 24);
  CHECK(xp.E == (closure(K, X) - X));
  CHECK(conley_index(xp).poincare().empty());  // semistable: index trivial

  IndexPair e35 = index_pair_pf(*an.f3, an.N, fx::named_set(K, {{3, 5}}));
  CHECK(e35.P == fx::named_set(K, {{3}, {4}, {5}, {3, 4}, {4, 5}, {3, 5}}));
  CHECK(e35.interior() == fx::named_set(K, {{3, 5}}));
  CHECK(conley_index(e35).poincare() == std::vector<int>{0, 1});
}

TEST_CASE("closure pairs and push-forward pairs carry the same index") {
  // two very different pairs for the same invariant set agree in homology
  auto run = [](const MultivectorField& f, const SimplexSet& N) {
    auto d = minimal_morse_decomposition(f, N);
    for (const SimplexSet& S : d.sets) {
      IndexPair plain = plain_pair(f, S);
      IndexPairReport rep = validate_index_pair(plain);
      CHECK(rep.pass());
      CHECK(rep.invariant == S);
      CHECK(rep.clauses.size() == 2);

      IndexPair pf = index_pair_pf(f, N, S);
      CHECK(conley_index(plain).betti == conley_index(pf).betti);
    }
  };
  auto iv = fx::interval();
  run(*iv.f, iv.K->full_set());
  auto tr = fx::full_triangle();
  run(*tr.f, tr.K->full_set());
  auto ci = fx::hollow_circle();
  run(*ci.f, ci.K->full_set());
  auto an = fx::annulus3();
  run(*an.f1, an.N);
  run(*an.f2, an.N);
  run(*an.f3, an.N);
  for (int p : {3, 5}) {
    auto an_p = fx::annulus3(p);
    run(*an_p.f1, an_p.N);
    run(*an_p.f3, an_p.N);
  }
}

TEST_CASE("index pair validation flags broken pairs with witnesses") {
  auto iv = fx::interval();
  // (cl b, emptyset) is fine; ({a}, emptyset) leaks through the edge
  IndexPair bad;
  bad.P = fx::named_set(*iv.K, {{0}});
  bad.E = iv.K->empty_set();
  bad.N = iv.K->full_set();
  bad.kind = IndexPair::Kind::InN;
  bad.field = iv.f.get();
  IndexPairReport rep = validate_index_pair(bad);
  CHECK(!rep.pass());
  bool some_clause_failed = false;
  for (const auto& c : rep.clauses)
    if (!c.pass) {
      some_clause_failed = true;
      REQUIRE(c.witness.size() == 2);
      CHECK(c.witness[0] == iv.a);   // source
      CHECK(c.witness[1] == iv.ab);  // escapes P but stays in N
    }
  CHECK(some_clause_failed);

  // structural failure: E not inside P
  IndexPair structural;
  structural.P = fx::named_set(*iv.K, {{1}});
  structural.E = fx::named_set(*iv.K, {{0}});
  structural.N = iv.K->full_set();
  structural.field = iv.f.get();
  rep = validate_index_pair(structural);
  CHECK(!rep.structural_ok);
  CHECK(!rep.pass());
  REQUIRE(!rep.structural_witness.empty());
  CHECK(rep.structural_witness[0] == iv.a);

  // non-closed P
  IndexPair open_p;
  open_p.P = fx::named_set(*iv.K, {{0, 1}});
  open_p.E = iv.K->empty_set();
  open_p.N = iv.K->full_set();
  open_p.field = iv.f.get();
  CHECK(!validate_index_pair(open_p).structural_ok);
}

TEST_CASE("intersections of index pairs validate under the intersection field") {
  auto an = fx::annulus3();
  const auto& K = *an.K;

  // identical invariant set, two fields: junction pair for the stray edge
  IndexPair a = index_pair_pf(*an.f1, an.N, fx::named_set(K, {{7, 8}}));
  IndexPair b = index_pair_pf(*an.f2, an.N, fx::named_set(K, {{7, 8}}));
  IntersectedPair j = intersect_index_pairs(a, b);
  CHECK(j.pair.P == (a.P & b.P));
  CHECK(j.pair.E == (a.E & b.E));
  CHECK(is_refinement(*j.field, *an.f1));
  CHECK(is_refinement(*j.field, *an.f2));
  CHECK(validate_index_pair(j.pair).pass());
  CHECK(conley_index(j.pair).poincare() == std::vector<int>{0, 1});

  // attractor against repeller: intersection still a valid pair
  IndexPair ir1 = index_pair_pf(*an.f1, an.N, fx::a3_inner_ring(K));
  IndexPair st4 = index_pair_pf(*an.f1, an.N, fx::a3_star4(K));
  IndexPair both = intersect_index_pairs(ir1, st4, *an.f1);
  CHECK(validate_index_pair(both).pass());
  CHECK(both.P == ir1.P);  // the attractor pair is the smaller one

  // mismatched isolating sets are rejected
  IndexPair shrunk = a;
  shrunk.N = a.P;
  try {
    intersect_index_pairs(shrunk, b, *an.f2);
    FAIL("expected a DifferentN error");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::DifferentN);
  }
}

TEST_CASE("random index pair intersections always validate") {
  std::mt19937 rng(907);
  int done = 0;
  for (int it = 0; it < 200 && done < 40; ++it) {
    auto K = fx::random_complex(rng, 24);
    auto f1 = fx::random_field(rng, K, 25);
    auto f2 = fx::random_field(rng, K, 25);
    SimplexSet N = K->full_set();
    auto d1 = minimal_morse_decomposition(*f1, N);
    auto d2 = minimal_morse_decomposition(*f2, N);
    if (d1.sets.empty() || d2.sets.empty()) continue;
    IndexPair a = index_pair_pf(*f1, N, d1.sets[rng() % d1.sets.size()]);
    IndexPair b = index_pair_pf(*f2, N, d2.sets[rng() % d2.sets.size()]);
    IntersectedPair j = intersect_index_pairs(a, b);
    CHECK(validate_index_pair(j.pair).pass());
    ++done;
  }
  CHECK(done == 40);
}

TEST_CASE("restriction to a smaller isolating set") {
  auto an = fx::annulus3();
  const auto& K = *an.K;

  IndexPair e78 = index_pair_pf(*an.f1, an.N, fx::named_set(K, {{7, 8}}));
  IndexPair cut = restrict_index_pair(e78, e78.P);
  CHECK(cut.P == e78.P);
  CHECK(cut.E == e78.E);
  CHECK(cut.N == e78.P);
  CHECK(conley_index(cut).betti == conley_index(e78).betti);

  // interior sticking out of N' is refused
  auto iv = fx::interval();
  IndexPair whole;
  whole.P = iv.K->full_set();
  whole.E = iv.K->empty_set();
  whole.N = iv.K->full_set();
  whole.field = iv.f.get();
  try {
    restrict_index_pair(whole, fx::named_set(*iv.K, {{1}}));
    FAIL("expected InteriorEscapes");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::InteriorEscapes);
  }
  CHECK_THROWS_AS((void)restrict_index_pair(whole, fx::named_set(*iv.K, {{0, 1}})), Error);
}

TEST_CASE("thickening absorbs whole vectors while guarding the invariant set") {
  auto iv = fx::interval();
  SimplexSet b_only = fx::named_set(*iv.K, {{1}});
  auto d = minimal_morse_decomposition(*iv.f, iv.K->full_set());
  IndexPair ip = index_pair_pf(*iv.f, iv.K->full_set(), b_only);
  CHECK(ip.P == b_only);
  CHECK(ip.E.empty());

  IndexPair same = thicken_index_pair(*iv.f, ip, d, 0);
  CHECK(same.P == ip.P);

  IndexPair fat = thicken_index_pair(*iv.f, ip, d, 1);
  CHECK(fat.P == iv.K->full_set());
  CHECK(fat.E.empty());
  CHECK(validate_index_pair(fat).pass());
  CHECK(invariant_part(*iv.f, fat.interior()) == b_only);
  // index unchanged by thickening
  CHECK(conley_index(fat).betti == conley_index(ip).betti);

  // a decomposition that forgets a Morse set lets growth swallow it
  auto K = fx::complex_of({{0, 1, 2}});
  auto f = fx::field_of(K, {{{0, 1, 2}}, {{0}, {0, 1}}, {{1}, {1, 2}}, {{2}, {0, 2}}});
  SimplexSet boundary = K->full_set() - fx::named_set(*K, {{0, 1, 2}});
  IndexPair bp = index_pair_pf(*f, K->full_set(), boundary);
  MorseDecomposition partial;
  partial.N = K->full_set();
  partial.sets = {boundary};
  try {
    thicken_index_pair(*f, bp, partial, 1);
    FAIL("expected InvariantChanged");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::InvariantChanged);
  }

  // with the full decomposition the same growth is blocked and nothing happens
  auto dd = minimal_morse_decomposition(*f, K->full_set());
  IndexPair still = thicken_index_pair(*f, bp, dd, 3);
  CHECK(still.P == bp.P);
}

TEST_CASE("thickening preserves the index on fixture Morse sets") {
  auto an = fx::annulus3();
  for (const auto& fp : {an.f1, an.f2, an.f3}) {
    auto d = minimal_morse_decomposition(*fp, an.N);
    for (const SimplexSet& S : d.sets) {
      IndexPair ip = index_pair_pf(*fp, an.N, S);
      ConleyIndex base = conley_index(ip);
      for (int k : {1, 2, 3}) {
        IndexPair fat = thicken_index_pair(*fp, ip, d, k);
        CHECK(validate_index_pair(fat).pass());
        CHECK(invariant_part(*fp, fat.interior()) == S);
        CHECK(conley_index(fat).betti == base.betti);
      }
    }
  }
}

TEST_CASE("assembled decompositions validate their input") {
  auto an = fx::annulus3();
  const auto& K = *an.K;
  SimplexSet ir = fx::a3_inner_ring(K);
  SimplexSet st4 = fx::a3_star4(K);
  SimplexSet e78 = fx::named_set(K, {{7, 8}});

  // coarsening: the whole repelling star as one Morse set, in caller order
  auto d = assemble_morse_decomposition(*an.f2, an.N, {st4, ir, e78});
  REQUIRE(d.sets.size() == 3);
  CHECK(d.sets[0] == st4);
  CHECK(d.sets[1] == ir);
  CHECK(d.cover_edges == std::vector<std::pair<int, int>>{{0, 2}, {2, 1}});
  check_order_sane(d);

  auto code_of = [&](const std::vector<SimplexSet>& sets) {
    try {
      assemble_morse_decomposition(*an.f2, an.N, sets);
    } catch (const Error& e) {
      return e.code;
    }
    return ErrorCode::EmptyInput;  // marker for "no error"
  };
  CHECK(code_of({st4, ir, e78, K.empty_set()}) == ErrorCode::BadInput);
  CHECK(code_of({st4, ir, e78, ir}) == ErrorCode::BadInput);
  SimplexSet open_ring = ir;
  open_ring.reset(fx::sid(K, {0}));
  CHECK(code_of({st4, open_ring, e78}) == ErrorCode::NotInvariant);
  CHECK(code_of({st4, ir}) == ErrorCode::ValidationFailed);  // stray edge not covered

  auto co = fx::corridor();
  try {
    assemble_morse_decomposition(*co.f, co.K->full_set(), {co.S});
    FAIL("expected NotIsolated");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::NotIsolated);
  }
}

TEST_CASE("Conley-Morse graphs of the fixtures") {
  auto tr = fx::full_triangle();
  auto d = minimal_morse_decomposition(*tr.f, tr.K->full_set());
  ConleyMorseGraph g = conley_morse_graph(*tr.f, tr.K->full_set(), d);
  REQUIRE(g.size() == 2);
  CHECK(g.poincare[0] == std::vector<int>{1, 1});
  CHECK(g.poincare[1] == std::vector<int>{0, 0, 1});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{1, 0}});

  auto an = fx::annulus3();
  d = minimal_morse_decomposition(*an.f1, an.N);
  g = conley_morse_graph(*an.f1, an.N, d);
  REQUIRE(g.size() == 3);
  CHECK(g.poincare[0] == std::vector<int>{1, 1});
  CHECK(g.poincare[1] == std::vector<int>{0, 0, 1});
  CHECK(g.poincare[2] == std::vector<int>{0, 1});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{1, 0}, {1, 2}, {2, 0}});

  d = minimal_morse_decomposition(*an.f2, an.N);
  g = conley_morse_graph(*an.f2, an.N, d);
  REQUIRE(g.size() == 4);
  CHECK(g.poincare[0] == std::vector<int>{1, 1});
  CHECK(g.poincare[1] == std::vector<int>{1});
  CHECK(g.poincare[2] == std::vector<int>{0, 1, 1});
  CHECK(g.poincare[3] == std::vector<int>{0, 1});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{2, 0}, {2, 1}, {2, 3}, {3, 0}});
  CHECK(g.has_edge(2, 0));
  CHECK(!g.has_edge(0, 2));

  d = minimal_morse_decomposition(*an.f3, an.N);
  g = conley_morse_graph(*an.f3, an.N, d);
  REQUIRE(g.size() == 3);
  CHECK(g.poincare[0] == std::vector<int>{});
  CHECK(g.poincare[1] == std::vector<int>{1});
  CHECK(g.poincare[2] == std::vector<int>{0, 1});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {2, 1}});
}

TEST_CASE("Poincare coefficient arrays") {
  ConleyIndex a{{{0, 1}, {2, 3}}};
  CHECK(a.poincare() == std::vector<int>{1, 0, 3});
  ConleyIndex b{};
  CHECK(b.poincare().empty());
  ConleyIndex c{{{1, 2}}};
  CHECK(c.poincare() == std::vector<int>{0, 2});
}
