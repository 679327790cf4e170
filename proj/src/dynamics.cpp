#include "cmg/dynamics.hpp"

#include <algorithm>
#include <deque>

namespace cmg {

SimplexSet DynDigraph::succ(int sigma) const {
  SimplexSet out = fv(*field, sigma);
  out &= domain;
  return out;
}

SimplexSet DynDigraph::preds(int sigma) const {
  SimplexSet out = field->vector(field->vector_of(sigma));
  out |= field->complex().star_of(sigma);
  out &= domain;
  return out;
}

DynDigraph build_digraph(const MultivectorField& f, const SimplexSet& A) {
  return DynDigraph{&f, A};
}

namespace {

std::vector<SimplexSet> strongly_connected_components(const DynDigraph& G) {
  int n = G.domain.universe_size();
  std::vector<int> nodes = G.domain.ids();
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;
  std::vector<SimplexSet> comps;

  std::vector<std::vector<int>> succ_cache(n);
  std::vector<char> succ_ready(n, 0);
  auto successors = [&](int v) -> const std::vector<int>& {
    if (!succ_ready[v]) {
      succ_cache[v] = G.succ(v).ids();
      succ_ready[v] = 1;
    }
    return succ_cache[v];
  };

  struct Frame {
    int v;
    size_t i;
  };
  std::vector<Frame> call;
  for (int root : nodes) {
    if (index[root] >= 0) continue;
    index[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    call.push_back({root, 0});
    while (!call.empty()) {
      int v = call.back().v;
      const auto& ss = successors(v);
      if (call.back().i < ss.size()) {
        int w = ss[call.back().i++];
        if (index[w] < 0) {
          index[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        call.pop_back();
        if (!call.empty())
          lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
        if (lowlink[v] == index[v]) {
          SimplexSet comp(n);
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.set(w);
            if (w == v) break;
          }
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const SimplexSet& a, const SimplexSet& b) { return a.first() < b.first(); });
  return comps;
}

SimplexSet forward_reach(const MultivectorField& f, const SimplexSet& domain,
                         const SimplexSet& seeds) {
  DynDigraph G{&f, domain};
  SimplexSet seen = seeds;
  seen &= domain;
  std::deque<int> queue;
  seen.for_each([&](int i) { queue.push_back(i); });
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    G.succ(v).for_each([&](int w) {
      if (!seen.test(w)) {
        seen.set(w);
        queue.push_back(w);
      }
    });
  }
  return seen;
}

SimplexSet backward_reach(const MultivectorField& f, const SimplexSet& domain,
                          const SimplexSet& seeds) {
  DynDigraph G{&f, domain};
  SimplexSet seen = seeds;
  seen &= domain;
  std::deque<int> queue;
  seen.for_each([&](int i) { queue.push_back(i); });
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    G.preds(v).for_each([&](int w) {
      if (!seen.test(w)) {
        seen.set(w);
        queue.push_back(w);
      }
    });
  }
  return seen;
}

}  // namespace

std::vector<EssentialScc> essential_sccs(const MultivectorField& f, const SimplexSet& A) {
  DynDigraph G{&f, A};
  std::vector<EssentialScc> out;
  for (SimplexSet& comp : strongly_connected_components(G)) {
    bool critical = false;
    std::vector<int> vecs;
    comp.for_each([&](int id) { vecs.push_back(f.vector_of(id)); });
    std::sort(vecs.begin(), vecs.end());
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
    int distinct_vectors = int(vecs.size());
    for (int v : vecs)
      if (f.is_critical(v)) {
        critical = true;
        break;
      }
    if (!critical && distinct_vectors < 2) continue;

    // a vector wholly inside the domain induces a complete subdigraph, so
    // it cannot straddle two components
    for (int v : vecs) {
      if (A.contains(f.vector(v)) && !comp.contains(f.vector(v)))
        throw Error(ErrorCode::ValidationFailed, "component splits a multivector",
                    {f.vector(v).first()});
    }

    out.push_back({std::move(comp), critical ? EssentialScc::Anchor::CriticalVector
                                             : EssentialScc::Anchor::MultiVectorCycle});
  }
  return out;
}

SimplexSet invariant_part(const MultivectorField& f, const SimplexSet& A) {
  SimplexSet anchors(A.universe_size());
  for (const EssentialScc& c : essential_sccs(f, A)) anchors |= c.members;
  if (anchors.empty()) return anchors;
  SimplexSet fwd = forward_reach(f, A, anchors);
  SimplexSet bwd = backward_reach(f, A, anchors);
  fwd &= bwd;
  return fwd;
}

SimplexSet push_forward(const MultivectorField& f, const SimplexSet& N, const SimplexSet& A) {
  if (!is_closed(f.complex(), N)) throw Error(ErrorCode::NotClosed, "N not closed");
  if (!N.contains(A)) throw Error(ErrorCode::NotContained, "A not within N");
  return forward_reach(f, N, A);
}

IsolationResult is_isolated(const MultivectorField& f, const SimplexSet& N,
                            const SimplexSet& S) {
  if (!is_closed(f.complex(), N)) throw Error(ErrorCode::NotClosed, "N not closed");
  if (!N.contains(S)) throw Error(ErrorCode::NotContained, "S not within N");
  IsolationResult r;

  SimplexSet inv = invariant_part(f, S);
  if (inv != S) {
    r.failed_clause = 1;
    SimplexSet missing = S - inv;
    r.witness = {missing.first()};
    return r;
  }

  std::vector<int> vecs;
  S.for_each([&](int id) { vecs.push_back(f.vector_of(id)); });
  std::sort(vecs.begin(), vecs.end());
  vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
  for (int v : vecs) {
    if (!S.contains(f.vector(v))) {
      SimplexSet missing = f.vector(v) - S;
      r.failed_clause = 2;
      r.witness = {(f.vector(v) & S).first(), missing.first()};
      return r;
    }
  }

  // exit set, then search N \ S for a way back in
  DynDigraph G{&f, N};
  int n = N.universe_size();
  std::vector<int> parent(n, -3);  // -3 unvisited; -2-sigma encodes the emitting member
  std::deque<int> queue;
  std::vector<int> members = S.ids();
  for (int sigma : members) {
    SimplexSet ex = G.succ(sigma);
    ex -= S;
    ex.for_each([&](int x) {
      if (parent[x] == -3) {
        parent[x] = -2 - sigma;
        queue.push_back(x);
      }
    });
  }
  while (!queue.empty()) {
    int y = queue.front();
    queue.pop_front();
    SimplexSet nxt = G.succ(y);
    int back = -1;
    nxt.for_each([&](int z) {
      if (back < 0 && S.test(z)) back = z;
    });
    if (back >= 0) {
      std::vector<int> path = {back};
      int cur = y;
      while (cur >= 0) {
        path.push_back(cur);
        int par = parent[cur];
        if (par <= -2) {
          path.push_back(-2 - par);
          break;
        }
        cur = par;
      }
      std::reverse(path.begin(), path.end());
      r.failed_clause = 3;
      r.witness = std::move(path);
      return r;
    }
    nxt.for_each([&](int z) {
      if (!S.test(z) && parent[z] == -3) {
        parent[z] = y;
        queue.push_back(z);
      }
    });
  }

  r.isolated = true;
  return r;
}

SimplexSet isolated_completion(const MultivectorField& f, const SimplexSet& N,
                               const SimplexSet& S) {
  if (!is_closed(f.complex(), N)) throw Error(ErrorCode::NotClosed, "N not closed");
  if (!N.contains(S)) throw Error(ErrorCode::NotContained, "S not within N");
  if (invariant_part(f, S) != S) throw Error(ErrorCode::NotInvariant, "S is not invariant");
  SimplexSet fwd = forward_reach(f, N, S);
  SimplexSet bwd = backward_reach(f, N, S);
  fwd &= bwd;
  IsolationResult chk = is_isolated(f, N, fwd);
  if (!chk.isolated)
    throw Error(ErrorCode::ValidationFailed, "completion fails isolation", chk.witness);
  return fwd;
}

std::optional<std::vector<int>> connection_path(const MultivectorField& f, const SimplexSet& N,
                                                const SimplexSet& from, const SimplexSet& to,
                                                const SimplexSet& forbidden_interior,
                                                bool require_nonempty_interior) {
  DynDigraph G{&f, N};
  int n = N.universe_size();
  std::vector<int> parent(n, -3);
  std::deque<int> queue;

  std::vector<int> seeds = from.ids();
  for (int sigma : seeds) {
    SimplexSet nxt = G.succ(sigma);
    std::optional<std::vector<int>> direct;
    nxt.for_each([&](int x) {
      if (!direct && !require_nonempty_interior && to.test(x))
        direct = std::vector<int>{sigma, x};
    });
    if (direct) return direct;
    nxt.for_each([&](int x) {
      if (!forbidden_interior.test(x) && parent[x] == -3) {
        parent[x] = -2 - sigma;
        queue.push_back(x);
      }
    });
  }
  while (!queue.empty()) {
    int y = queue.front();
    queue.pop_front();
    SimplexSet nxt = G.succ(y);
    int hit = -1;
    nxt.for_each([&](int z) {
      if (hit < 0 && to.test(z)) hit = z;
    });
    if (hit >= 0) {
      std::vector<int> path = {hit};
      int cur = y;
      while (cur >= 0) {
        path.push_back(cur);
        int par = parent[cur];
        if (par <= -2) {
          path.push_back(-2 - par);
          cur = -1;
        } else {
          cur = par;
        }
      }
      std::reverse(path.begin(), path.end());
      return path;
    }
    nxt.for_each([&](int z) {
      if (!forbidden_interior.test(z) && parent[z] == -3) {
        parent[z] = y;
        queue.push_back(z);
      }
    });
  }
  return std::nullopt;
}

std::optional<std::vector<int>> direct_connection(const MultivectorField& f, const SimplexSet& N,
                                                  const std::vector<SimplexSet>& morse_sets,
                                                  int from, int to) {
  SimplexSet forbidden(N.universe_size());
  for (size_t i = 0; i < morse_sets.size(); ++i) {
    if (!N.contains(morse_sets[i]))
      throw Error(ErrorCode::NotContained, "Morse set not within N");
    if (morse_sets[i].intersects(forbidden))
      throw Error(ErrorCode::BadInput, "Morse sets overlap");
    forbidden |= morse_sets[i];
  }
  return connection_path(f, N, morse_sets[from], morse_sets[to], forbidden, from == to);
}

namespace {

// shortest path a -> b (length >= 0) in a small dense digraph
std::vector<int> oracle_path(const std::vector<std::vector<char>>& adj, int a, int b) {
  int m = int(adj.size());
  if (a == b) return {a};
  std::vector<int> parent(m, -1);
  std::deque<int> queue{a};
  std::vector<char> seen(m, 0);
  seen[a] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w = 0; w < m; ++w) {
      if (!adj[v][w] || seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      if (w == b) {
        std::vector<int> path = {b};
        int cur = b;
        while (parent[cur] >= 0) {
          cur = parent[cur];
          path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  throw Error(ErrorCode::ValidationFailed, "oracle path vanished");
}

}  // namespace

SimplexSet oracle_invariant_part(const MultivectorField& f, const SimplexSet& A) {
  std::vector<int> nodes = A.ids();
  int m = int(nodes.size());
  if (m > 14) throw Error(ErrorCode::TooLarge, "oracle limited to 14 simplices");
  SimplexSet result(A.universe_size());
  if (m == 0) return result;

  const SimplicialComplex& K = f.complex();
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      adj[i][j] = K.closure_of(nodes[i]).test(nodes[j]) ||
                  f.vector_of(nodes[i]) == f.vector_of(nodes[j]);

  // reachability by paths of length >= 1
  std::vector<std::vector<char>> reach = adj;
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      if (reach[i][k])
        for (int j = 0; j < m; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  std::vector<char> anchor(m, 0);
  std::vector<int> cycle_mate(m, -1);
  for (int u = 0; u < m; ++u) {
    if (f.is_critical(f.vector_of(nodes[u]))) {
      anchor[u] = 1;
      continue;
    }
    for (int w = 0; w < m; ++w)
      if (f.vector_of(nodes[w]) != f.vector_of(nodes[u]) && reach[u][w] && reach[w][u]) {
        anchor[u] = 1;
        cycle_mate[u] = w;
        break;
      }
  }

  auto cycle_at = [&](int u) -> std::vector<int> {
    if (cycle_mate[u] < 0) return {u, u};  // constant solution at a critical vector
    std::vector<int> go = oracle_path(adj, u, cycle_mate[u]);
    std::vector<int> back = oracle_path(adj, cycle_mate[u], u);
    go.insert(go.end(), back.begin() + 1, back.end());
    return go;  // closed walk u ... u
  };

  for (int s = 0; s < m; ++s) {
    int b = -1, fa = -1;
    for (int u = 0; u < m && b < 0; ++u)
      if (anchor[u] && (u == s || reach[u][s])) b = u;
    for (int u = 0; u < m && fa < 0; ++u)
      if (anchor[u] && (u == s || reach[s][u])) fa = u;
    if (b < 0 || fa < 0) continue;

    // splice: ...(cycle at b)(b -> s)(s -> fa)(cycle at fa)...
    std::vector<int> cb = cycle_at(b), cf = cycle_at(fa);
    std::vector<int> seq;
    while (int(seq.size()) < 2 * m + 1) seq.insert(seq.end(), cb.begin(), cb.end() - 1);
    seq.push_back(b);
    std::vector<int> mid = oracle_path(adj, b, s);
    std::vector<int> mid2 = oracle_path(adj, s, fa);
    seq.insert(seq.end(), mid.begin() + 1, mid.end());
    size_t s_index = seq.size() - 1;
    seq.insert(seq.end(), mid2.begin() + 1, mid2.end());
    size_t base = seq.size();
    while (seq.size() < base + 2 * size_t(m) + 1)
      seq.insert(seq.end(), cf.begin() + 1, cf.end());

    // literal verification of the witness
    int L = int(seq.size());
    bool ok = seq[s_index] == s;
    for (int i = 0; ok && i + 1 < L; ++i)
      ok = fv(f, nodes[seq[i]]).test(nodes[seq[i + 1]]) && A.test(nodes[seq[i]]);
    for (int i = m; ok && i < L - m; ++i) {
      int vec = f.vector_of(nodes[seq[i]]);
      if (f.is_critical(vec)) continue;
      bool exit_back = false, exit_fwd = false;
      for (int t = i; t >= 0 && !exit_back; --t) exit_back = f.vector_of(nodes[seq[t]]) != vec;
      for (int t = i; t < L && !exit_fwd; ++t) exit_fwd = f.vector_of(nodes[seq[t]]) != vec;
      ok = exit_back && exit_fwd;
    }
    ok = ok && s_index >= size_t(m) && s_index < size_t(L - m);
    if (!ok)
      throw Error(ErrorCode::ValidationFailed, "oracle witness failed literal check",
                  {nodes[s]});
    result.set(nodes[s]);
  }
  return result;
}

}  // namespace cmg
