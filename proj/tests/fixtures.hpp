#ifndef CMG_TEST_FIXTURES_HPP
#define CMG_TEST_FIXTURES_HPP

#include <algorithm>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmg/conley.hpp"
#include "cmg/dynamics.hpp"
#include "cmg/mvf.hpp"

namespace fx {

using cmg::build_complex;
using cmg::build_field;
using cmg::MultivectorField;
using cmg::SimplexSet;
using cmg::SimplicialComplex;

using KPtr = std::shared_ptr<const SimplicialComplex>;
using FPtr = std::shared_ptr<const MultivectorField>;

// A simplex named by its vertices; a multivector is a list of them.
using Simp = std::vector<int>;
using Vec = std::vector<Simp>;

inline KPtr complex_of(const std::vector<Simp>& generators) {
  return std::make_shared<const SimplicialComplex>(build_complex(generators));
}

inline int sid(const SimplicialComplex& K, Simp verts) {
  std::sort(verts.begin(), verts.end());
  int id = K.id_of(verts);
  if (id < 0) throw std::runtime_error("fixture names a simplex that is not in the complex");
  return id;
}

inline SimplexSet named_set(const SimplicialComplex& K, const Vec& simplices) {
  SimplexSet s(K.size());
  for (const Simp& t : simplices) s.set(sid(K, t));
  return s;
}

inline FPtr field_of(const KPtr& K, const std::vector<Vec>& vectors, int p = 2) {
  std::vector<std::vector<int>> partition;
  for (const Vec& v : vectors) {
    std::vector<int> ids;
    for (const Simp& t : v) ids.push_back(sid(*K, t));
    partition.push_back(std::move(ids));
  }
  return std::make_shared<MultivectorField>(build_field(K, partition, p));
}

// ---- interval: two vertices joined by an edge, flowing toward b ----

struct Interval {
  KPtr K;
  FPtr f;
  int a, b, ab;
};

inline Interval interval(int p = 2) {
  Interval r;
  r.K = complex_of({{0, 1}});
  r.a = sid(*r.K, {0});
  r.b = sid(*r.K, {1});
  r.ab = sid(*r.K, {0, 1});
  r.f = field_of(r.K, {{{0}, {0, 1}}, {{1}}}, p);
  return r;
}

// ---- full triangle: critical 2-cell over a rotating boundary ----

struct Triangle {
  KPtr K;
  FPtr f;
};

inline Triangle full_triangle(int p = 2) {
  Triangle r;
  r.K = complex_of({{0, 1, 2}});
  r.f = field_of(r.K, {{{0, 1, 2}}, {{0}, {0, 1}}, {{1}, {1, 2}}, {{2}, {0, 2}}}, p);
  return r;
}

// ---- hollow circle: triangle boundary rotating forever ----

struct Circle {
  KPtr K;
  FPtr f;
};

inline Circle hollow_circle(int p = 2) {
  Circle r;
  r.K = complex_of({{0, 1}, {0, 2}, {1, 2}});
  r.f = field_of(r.K, {{{0}, {0, 1}}, {{1}, {1, 2}}, {{2}, {0, 2}}}, p);
  return r;
}

// ---- completion fixture: a one-way corridor from the 2-cell down to d ----

struct Corridor {
  KPtr K;
  FPtr f;
  SimplexSet S;  // critical triangle plus the far vertex
};

inline Corridor corridor(int p = 2) {
  Corridor r;
  r.K = complex_of({{0, 1, 2}, {1, 3}});
  r.f = field_of(r.K,
                 {{{0, 1, 2}}, {{3}}, {{1}, {1, 3}}, {{0}, {0, 1}}, {{2}, {0, 2}}, {{1, 2}}}, p);
  r.S = named_set(*r.K, {{0, 1, 2}, {3}});
  return r;
}

// ---- three-ring annulus: 9 vertices, 21 edges, 12 triangles ----
//
// Rings: inner {0,1,2}, middle {3,4,5}, outer {6,7,8}. Band 1 (inner ring to
// middle ring) carries the dynamics of interest; band 2 funnels everything
// toward the middle. Field 1: attracting inner cycle + repelling fixed point
// at the open star of vertex 4 (+ an unavoidable critical edge {7,8} in the
// outer funnel). Field 2: the repelling point splits into an attracting
// point {4} and a repelling periodic orbit around it. Field 3: the inner
// cycle absorbs the collar and becomes semistable; {4} keeps attracting.

struct Annulus3 {
  KPtr K;
  FPtr f1, f2, f3;
  SimplexSet N;  // the whole complex
};

inline Annulus3 annulus3(int p = 2) {
  Annulus3 r;
  r.K = complex_of({{0, 1, 4},
                    {0, 3, 4},
                    {1, 2, 5},
                    {1, 4, 5},
                    {0, 2, 3},
                    {2, 3, 5},
                    {3, 4, 7},
                    {3, 6, 7},
                    {4, 5, 8},
                    {4, 7, 8},
                    {3, 5, 6},
                    {5, 6, 8}});
  if (r.K->size() != 42) throw std::runtime_error("annulus3: unexpected size");
  r.N = r.K->full_set();

  const Vec star4 = {{4},       {0, 4},    {1, 4},    {3, 4},    {4, 5},    {4, 7},   {4, 8},
                     {0, 1, 4}, {0, 3, 4}, {1, 4, 5}, {3, 4, 7}, {4, 5, 8}, {4, 7, 8}};
  const std::vector<Vec> inner_cycle = {{{0}, {0, 1}}, {{1}, {1, 2}}, {{2}, {0, 2}}};
  // shared outer funnel of fields 1 and 2
  const std::vector<Vec> funnel = {{{3}, {0, 3}},       {{5}, {2, 5}},       {{2, 3}, {0, 2, 3}},
                                   {{3, 5}, {2, 3, 5}}, {{1, 5}, {1, 2, 5}}, {{3, 6}, {3, 6, 7}},
                                   {{5, 6}, {3, 5, 6}}, {{5, 8}, {5, 6, 8}}, {{7}, {3, 7}},
                                   {{6}, {6, 7}},       {{8}, {6, 8}},       {{7, 8}}};

  std::vector<Vec> v1 = {star4};
  v1.insert(v1.end(), inner_cycle.begin(), inner_cycle.end());
  v1.insert(v1.end(), funnel.begin(), funnel.end());
  r.f1 = field_of(r.K, v1, p);

  std::vector<Vec> v2 = {{{4}},
                         {{0, 4}, {0, 1, 4}},
                         {{1, 4}, {1, 4, 5}},
                         {{4, 5}, {4, 5, 8}},
                         {{4, 8}, {4, 7, 8}},
                         {{4, 7}, {3, 4, 7}},
                         {{3, 4}, {0, 3, 4}}};
  v2.insert(v2.end(), inner_cycle.begin(), inner_cycle.end());
  v2.insert(v2.end(), funnel.begin(), funnel.end());
  r.f2 = field_of(r.K, v2, p);

  std::vector<Vec> v3 = {// semistable collar around the inner cycle
                         {{0}, {0, 1}, {0, 4}, {0, 1, 4}},
                         {{1}, {1, 2}, {1, 5}, {1, 2, 5}},
                         {{2}, {0, 2}, {2, 3}, {0, 2, 3}},
                         {{1, 4}, {1, 4, 5}},
                         {{2, 5}, {2, 3, 5}},
                         {{0, 3}, {0, 3, 4}},
                         {{4}},
                         // outer funnel rearranged toward vertex 4
                         {{3}, {3, 4}},
                         {{5}, {4, 5}},
                         {{7}, {4, 7}},
                         {{8}, {4, 8}},
                         {{6}, {6, 7}},
                         {{3, 7}, {3, 4, 7}},
                         {{3, 6}, {3, 6, 7}},
                         {{5, 6}, {3, 5, 6}},
                         {{5, 8}, {4, 5, 8}},
                         {{7, 8}, {4, 7, 8}},
                         {{6, 8}, {5, 6, 8}},
                         {{3, 5}}};
  r.f3 = field_of(r.K, v3, p);
  return r;
}

// Named cell sets of the annulus3 story, for assertions.
inline SimplexSet a3_inner_ring(const SimplicialComplex& K) {
  return named_set(K, {{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}});
}
inline SimplexSet a3_star4(const SimplicialComplex& K) {
  return named_set(K, {{4},
                       {0, 4},
                       {1, 4},
                       {3, 4},
                       {4, 5},
                       {4, 7},
                       {4, 8},
                       {0, 1, 4},
                       {0, 3, 4},
                       {1, 4, 5},
                       {3, 4, 7},
                       {4, 5, 8},
                       {4, 7, 8}});
}
inline SimplexSet a3_repel_ring(const SimplicialComplex& K) {
  return named_set(K, {{0, 4},
                       {1, 4},
                       {4, 5},
                       {4, 8},
                       {4, 7},
                       {3, 4},
                       {0, 1, 4},
                       {1, 4, 5},
                       {4, 5, 8},
                       {4, 7, 8},
                       {3, 4, 7},
                       {0, 3, 4}});
}
inline SimplexSet a3_semistable(const SimplicialComplex& K) {
  SimplexSet s = a3_inner_ring(K);
  s |= named_set(K, {{0, 4},
                     {0, 1, 4},
                     {1, 5},
                     {1, 2, 5},
                     {2, 3},
                     {0, 2, 3},
                     {1, 4},
                     {1, 4, 5},
                     {2, 5},
                     {2, 3, 5},
                     {0, 3},
                     {0, 3, 4}});
  return s;
}

// ---- two-ring annulus for the thickening contrast ----
//
// Field P: attracting inner cycle, everything else a gradient funnel.
// Field Q: the attractor detours through vertex 5 (a quadrilateral cycle);
// inner ring cell {1,2} and its triangle now flow inward. The invariant
// circles of P and Q share only an arc, so at thickening 0 the circle class
// dies at both junctions; one thickening round grows both index pairs until
// their intersection carries the full inner ring.

struct Annulus2 {
  KPtr K;
  FPtr P, Q;
  SimplexSet N;
};

inline Annulus2 annulus2(int p = 2) {
  Annulus2 r;
  r.K = complex_of(
      {{0, 1, 4}, {0, 3, 4}, {1, 2, 5}, {1, 4, 5}, {0, 2, 3}, {2, 3, 5}});
  if (r.K->size() != 24) throw std::runtime_error("annulus2: unexpected size");
  r.N = r.K->full_set();
  r.P = field_of(r.K, {{{0}, {0, 1}},
                       {{1}, {1, 2}},
                       {{2}, {0, 2}},
                       {{3}, {0, 3}},
                       {{4}, {0, 4}},
                       {{5}, {1, 5}},
                       {{1, 4}, {0, 1, 4}},
                       {{3, 4}, {0, 3, 4}},
                       {{2, 5}, {1, 2, 5}},
                       {{2, 3}, {0, 2, 3}},
                       {{3, 5}, {2, 3, 5}},
                       {{4, 5}, {1, 4, 5}}},
                 p);
  r.Q = field_of(r.K, {{{0}, {0, 1}, {1}, {1, 5}, {5}, {2, 5}, {2}, {0, 2}},
                       {{3}, {0, 3}},
                       {{4}, {4, 5}},
                       {{1, 2}, {1, 2, 5}},
                       {{1, 4}, {1, 4, 5}},
                       {{0, 4}, {0, 1, 4}},
                       {{3, 4}, {0, 3, 4}},
                       {{2, 3}, {0, 2, 3}},
                       {{3, 5}, {2, 3, 5}}},
                 p);
  return r;
}

inline SimplexSet a2_inner_ring(const SimplicialComplex& K) { return a3_inner_ring(K); }
inline SimplexSet a2_quad(const SimplicialComplex& K) {
  return named_set(K, {{0}, {0, 1}, {1}, {1, 5}, {5}, {2, 5}, {2}, {0, 2}});
}

// ---- programmatic R x S triangulated annulus with a band attractor ----
//
// Vertex (r, s) is r*S + s. Each quad (r, s) splits into triangles
// {(r,s),(r,s+1),(r+1,s+1)} and {(r,s),(r+1,s),(r+1,s+1)}.

inline int gv(int S, int r, int s) { return r * S + ((s % S) + S) % S; }

inline KPtr grid_annulus(int R, int S) {
  std::vector<Simp> gens;
  for (int r = 0; r + 1 < R; ++r)
    for (int s = 0; s < S; ++s) {
      gens.push_back({gv(S, r, s), gv(S, r, s + 1), gv(S, r + 1, s + 1)});
      gens.push_back({gv(S, r, s), gv(S, r + 1, s), gv(S, r + 1, s + 1)});
    }
  return complex_of(gens);
}

// Gradient field whose unique Morse set is the ring cycle at row `band`.
inline FPtr band_attractor_field(const KPtr& K, int R, int S, int band, int p = 2) {
  auto ring = [&](int r, int s) { return Simp{gv(S, r, s), gv(S, r, s + 1)}; };
  auto radial = [&](int r, int s) { return Simp{gv(S, r, s), gv(S, r + 1, s)}; };
  auto diag = [&](int r, int s) { return Simp{gv(S, r, s), gv(S, r + 1, s + 1)}; };
  auto ta = [&](int r, int s) { return Simp{gv(S, r, s), gv(S, r, s + 1), gv(S, r + 1, s + 1)}; };
  auto tb = [&](int r, int s) { return Simp{gv(S, r, s), gv(S, r + 1, s), gv(S, r + 1, s + 1)}; };

  std::vector<Vec> vecs;
  for (int s = 0; s < S; ++s) vecs.push_back({{gv(S, band, s)}, ring(band, s)});
  for (int r = 0; r < R; ++r)
    for (int s = 0; s < S; ++s) {
      if (r < band) vecs.push_back({{gv(S, r, s)}, radial(r, s)});
      if (r > band) vecs.push_back({{gv(S, r, s)}, radial(r - 1, s)});
      if (r != band) vecs.push_back({ring(r, s), r < band ? ta(r, s) : tb(r - 1, s)});
      if (r + 1 < R) vecs.push_back({diag(r, s), r < band ? tb(r, s) : ta(r, s)});
    }
  return field_of(K, vecs, p);
}

inline SimplexSet band_ring(const SimplicialComplex& K, int S, int band) {
  SimplexSet s(K.size());
  for (int i = 0; i < S; ++i) {
    s.set(sid(K, {gv(S, band, i)}));
    Simp e{gv(S, band, i), gv(S, band, i + 1)};
    std::sort(e.begin(), e.end());
    s.set(sid(K, e));
  }
  return s;
}

// ---- randomized instances ----

inline KPtr random_complex(std::mt19937& rng, int max_cells) {
  int nv = 1 + int(rng() % 5);
  std::vector<Simp> gens;
  for (int v = 0; v < nv; ++v) gens.push_back({v});
  KPtr K = complex_of(gens);
  for (int tries = 0; tries < 12; ++tries) {
    int k = 2 + int(rng() % 2);  // edge or triangle
    if (k > nv) continue;
    std::vector<int> verts(nv);
    for (int v = 0; v < nv; ++v) verts[v] = v;
    std::shuffle(verts.begin(), verts.end(), rng);
    Simp cand(verts.begin(), verts.begin() + k);
    std::sort(cand.begin(), cand.end());
    if (std::find(gens.begin(), gens.end(), cand) != gens.end()) continue;
    gens.push_back(cand);
    KPtr next = complex_of(gens);
    if (next->size() > max_cells)
      gens.pop_back();
    else
      K = next;
  }
  return K;
}

// Partition built from singletons by randomly merging while convex.
inline FPtr random_field(std::mt19937& rng, const KPtr& K, int merge_tries, int p = 2) {
  std::vector<SimplexSet> vecs;
  for (int i = 0; i < K->size(); ++i) {
    SimplexSet v(K->size());
    v.set(i);
    vecs.push_back(v);
  }
  for (int t = 0; t < merge_tries && vecs.size() > 1; ++t) {
    size_t i = rng() % vecs.size(), j = rng() % vecs.size();
    if (i == j) continue;
    SimplexSet u = vecs[i] | vecs[j];
    if (!cmg::is_convex(*K, u)) continue;
    vecs[i] = u;
    vecs.erase(vecs.begin() + j);
  }
  std::vector<std::vector<int>> partition;
  for (const SimplexSet& v : vecs) partition.push_back(v.ids());
  return std::make_shared<MultivectorField>(build_field(K, partition, p));
}

// Random closed subset: closure of a random selection.
inline SimplexSet random_closed_set(std::mt19937& rng, const SimplicialComplex& K) {
  SimplexSet s(K.size());
  for (int i = 0; i < K.size(); ++i)
    if (rng() % 2) s.set(i);
  return cmg::closure(K, s);
}

}  // namespace fx

#endif
