#include "cmg/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace cmg {

namespace {

// Shared bookkeeping for building the gap slots of emitted sequences.
// Junction fields and gap pairs are memoized so that sequences crossing the
// same link share one intersection field object.
struct GapBuilder {
  const std::vector<MorseDecomposition>& decomps;
  const std::vector<std::vector<IndexPair>>& pairs;
  bool changing_n;
  std::map<int, std::shared_ptr<const MultivectorField>> fields;
  std::map<std::tuple<int, int, int>, std::pair<std::shared_ptr<const MultivectorField>, IndexPair>>
      gaps;

  const std::shared_ptr<const MultivectorField>& field_at(int junction) {
    auto it = fields.find(junction);
    if (it != fields.end()) return it->second;
    const MultivectorField* f1 = pairs[junction].front().field;
    const MultivectorField* f2 = pairs[junction + 1].front().field;
    auto made = std::make_shared<MultivectorField>(intersect_fields(*f1, *f2));
    return fields.emplace(junction, std::move(made)).first->second;
  }

  std::pair<std::shared_ptr<const MultivectorField>, IndexPair> gap(int junction, int u, int v) {
    auto key = std::make_tuple(junction, u, v);
    auto it = gaps.find(key);
    if (it != gaps.end()) return it->second;
    const IndexPair& a = pairs[junction][u];
    const IndexPair& b = pairs[junction + 1][v];
    const auto& f12 = field_at(junction);
    IndexPair slot;
    if (changing_n) {
      SimplexSet ncap = decomps[junction].N & decomps[junction + 1].N;
      IndexPair ra = restrict_index_pair(a, ncap);
      IndexPair rb = restrict_index_pair(b, ncap);
      slot = intersect_index_pairs(ra, rb, *f12);
    } else {
      slot = intersect_index_pairs(a, b, *f12);
    }
    auto value = std::make_pair(f12, std::move(slot));
    gaps.emplace(key, value);
    return value;
  }
};

struct Seq {
  int start = 0;
  std::vector<int> idx;
};

std::vector<FiltrationSequence> enumerate_sequences(
    const std::vector<MorseDecomposition>& decomps,
    const std::vector<std::vector<IndexPair>>& pairs, bool changing_n) {
  if (decomps.empty()) throw Error(ErrorCode::EmptyInput, "no steps");
  if (pairs.size() != decomps.size())
    throw Error(ErrorCode::MissingIndexPair, "one pair list per step required");
  int n = int(decomps.size());
  for (int i = 0; i < n; ++i) {
    if (pairs[i].size() != decomps[i].sets.size())
      throw Error(ErrorCode::MissingIndexPair,
                  "step " + std::to_string(i) + " needs one pair per Morse set");
    const MultivectorField* f = pairs[i].empty() ? nullptr : pairs[i].front().field;
    for (const IndexPair& ip : pairs[i]) {
      if (ip.field != f)
        throw Error(ErrorCode::BadInput, "pairs of one step must share a field");
      if (ip.N != decomps[i].N)
        throw Error(ErrorCode::DifferentN, "pair does not live in its step's isolating set");
    }
  }
  if (!changing_n)
    for (int i = 1; i < n; ++i)
      if (decomps[i].N != decomps[0].N)
        throw Error(ErrorCode::DifferentN, "steps use different isolating sets");

  // a link is viable when consecutive interiors meet; with per-step N both
  // interiors must additionally fit inside the junction intersection
  auto link_ok = [&](int junction, int u, int v) {
    const IndexPair& a = pairs[junction][u];
    const IndexPair& b = pairs[junction + 1][v];
    SimplexSet ia = a.interior(), ib = b.interior();
    if (!ia.intersects(ib)) return false;
    if (changing_n) {
      SimplexSet ncap = decomps[junction].N & decomps[junction + 1].N;
      if (!ncap.contains(ia) || !ncap.contains(ib)) return false;
    }
    return true;
  };

  std::vector<Seq> alive, all;
  for (int i = 0; i < n; ++i) {
    int m = int(decomps[i].sets.size());
    std::vector<char> in_sequence(m, 0);
    std::vector<char> extended(alive.size(), 0);
    std::vector<Seq> still_alive;
    for (int s = 0; s < int(alive.size()); ++s) {
      const Seq& seq = alive[s];
      int u = seq.idx.back();
      for (int v = 0; v < m; ++v) {
        if (!link_ok(i - 1, u, v)) continue;
        Seq grown = seq;
        grown.idx.push_back(v);
        still_alive.push_back(std::move(grown));
        in_sequence[v] = 1;
        extended[s] = 1;
      }
    }
    for (int s = 0; s < int(alive.size()); ++s)
      if (!extended[s]) all.push_back(std::move(alive[s]));
    alive = std::move(still_alive);
    for (int v = 0; v < m; ++v)
      if (!in_sequence[v]) alive.push_back(Seq{i, {v}});
  }
  for (Seq& s : alive) all.push_back(std::move(s));

  std::sort(all.begin(), all.end(), [](const Seq& a, const Seq& b) {
    if (a.start != b.start) return a.start < b.start;
    return a.idx < b.idx;
  });

  GapBuilder gb{decomps, pairs, changing_n, {}, {}};
  std::vector<FiltrationSequence> out;
  out.reserve(all.size());
  for (const Seq& s : all) {
    FiltrationSequence fs;
    fs.start = s.start;
    fs.morse_indices = s.idx;
    for (int k = 0; k < int(s.idx.size()); ++k) fs.pairs.push_back(pairs[s.start + k][s.idx[k]]);
    for (int k = 0; k + 1 < int(s.idx.size()); ++k) {
      auto [field, slot] = gb.gap(s.start + k, s.idx[k], s.idx[k + 1]);
      fs.gap_fields.push_back(std::move(field));
      fs.gap_pairs.push_back(std::move(slot));
    }
    out.push_back(std::move(fs));
  }
  return out;
}

// closure endpoints of a bar in 1-based absolute step coordinates
std::pair<int, int> closure_steps(const Bar& local, int start) {
  int a = (local.birth % 2 == 1) ? (local.birth + 1) / 2 : local.birth / 2;
  int b = (local.death % 2 == 1) ? (local.death + 1) / 2 : local.death / 2 + 1;
  return {a + start, b + start};
}

bool covers_steps(const FiltrationSequence& f, int a, int b) {
  return a >= f.start + 1 && b <= f.end() + 1;
}

bool subfiltration_equal(const FiltrationSequence& x, const FiltrationSequence& y, int a, int b) {
  if (!covers_steps(x, a, b) || !covers_steps(y, a, b)) return false;
  for (int s = a; s <= b; ++s) {
    const IndexPair& px = x.pairs[s - 1 - x.start];
    const IndexPair& py = y.pairs[s - 1 - y.start];
    if (px.P != py.P || px.E != py.E) return false;
  }
  for (int s = a; s < b; ++s) {
    const IndexPair& gx = x.gap_pairs[s - 1 - x.start];
    const IndexPair& gy = y.gap_pairs[s - 1 - y.start];
    if (gx.P != gy.P || gx.E != gy.E) return false;
  }
  return true;
}

GraphSlot graph_as_slot(const ConleyMorseGraph& g) {
  GraphSlot slot;
  if (g.size() == 0) return slot;
  std::vector<std::vector<int>> simplices;
  for (int i = 0; i < g.size(); ++i) simplices.push_back({i});
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    auto e = std::minmax(u, v);
    if (seen.insert({e.first, e.second}).second)
      simplices.push_back({e.first, e.second});
  }
  slot.complex = std::make_shared<const SimplicialComplex>(build_complex(simplices));
  return slot;
}

}  // namespace

std::vector<FiltrationSequence> find_conley_morse_filtrations(
    const std::vector<MorseDecomposition>& decompositions,
    const std::vector<std::vector<IndexPair>>& pairs) {
  return enumerate_sequences(decompositions, pairs, false);
}

std::vector<FiltrationSequence> changing_n_sequences(
    const std::vector<MorseDecomposition>& decompositions,
    const std::vector<std::vector<IndexPair>>& pairs) {
  return enumerate_sequences(decompositions, pairs, true);
}

RelevantCMGraph relevant_cm_graph(std::shared_ptr<const MultivectorField> f12,
                                  const MorseDecomposition& d12,
                                  const MultivectorField& f1, const MorseDecomposition& d1,
                                  const ConleyMorseGraph& g1,
                                  const MultivectorField& f2, const MorseDecomposition& d2,
                                  const ConleyMorseGraph& g2) {
  const SimplicialComplex& K = f12->complex();
  RelevantCMGraph out;
  out.field = f12;
  out.N = d12.N;

  auto container = [](const std::vector<SimplexSet>& sets, const SimplexSet& M) {
    int found = -1;
    for (int t = 0; t < int(sets.size()); ++t) {
      if (!sets[t].contains(M)) continue;
      if (found >= 0)
        throw Error(ErrorCode::ValidationFailed, "Morse set contained in two flanking sets",
                    {M.first()});
      found = t;
    }
    return found;
  };

  for (const SimplexSet& M : d12.sets) {
    int a = container(d1.sets, M);
    if (a < 0) continue;
    int b = container(d2.sets, M);
    if (b < 0) continue;
    out.sets.push_back(M);
    out.iota1.push_back(a);
    out.iota2.push_back(b);
  }

  for (const SimplexSet& M : out.sets) {
    IndexPair ip = index_pair_pf(*f12, d12.N, M);
    out.graph.poincare.push_back(conley_index(ip).poincare());
  }

  int m = out.size();
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      if (u == v) continue;
      SimplexSet forbidden(K.size());
      for (const SimplexSet& M : d12.sets) forbidden |= M;
      for (int t = 0; t < int(d1.sets.size()); ++t)
        if (t != out.iota1[u] && t != out.iota1[v]) forbidden |= d1.sets[t];
      for (int t = 0; t < int(d2.sets.size()); ++t)
        if (t != out.iota2[u] && t != out.iota2[v]) forbidden |= d2.sets[t];
      if (connection_path(*f12, d12.N, out.sets[u], out.sets[v], forbidden, false))
        out.graph.edges.emplace_back(u, v);
    }

  for (auto [u, v] : out.graph.edges) {
    bool ok1 = out.iota1[u] == out.iota1[v] || g1.has_edge(out.iota1[u], out.iota1[v]);
    bool ok2 = out.iota2[u] == out.iota2[v] || g2.has_edge(out.iota2[u], out.iota2[v]);
    if (!ok1 || !ok2)
      throw Error(ErrorCode::ValidationFailed, "edge not preserved by a containment map",
                  {out.sets[u].first(), out.sets[v].first()});
  }
  return out;
}

RelevantCMGraph relevant_cm_graph(const MultivectorField& f1, const MultivectorField& f2,
                                  const SimplexSet& N) {
  if (!f1.same_complex(f2))
    throw Error(ErrorCode::DifferentComplex, "fields live on different complexes");
  if (f1.characteristic() != f2.characteristic())
    throw Error(ErrorCode::BadInput, "fields use different characteristics");
  MorseDecomposition d1 = minimal_morse_decomposition(f1, N);
  MorseDecomposition d2 = minimal_morse_decomposition(f2, N);
  ConleyMorseGraph g1 = conley_morse_graph(f1, N, d1);
  ConleyMorseGraph g2 = conley_morse_graph(f2, N, d2);
  auto f12 = std::make_shared<const MultivectorField>(intersect_fields(f1, f2));
  MorseDecomposition d12 = minimal_morse_decomposition(*f12, N);
  return relevant_cm_graph(std::move(f12), d12, f1, d1, g1, f2, d2, g2);
}

std::vector<ZigzagModule> graph_filtration(const std::vector<ConleyMorseGraph>& graphs,
                                           const std::vector<RelevantCMGraph>& relevants,
                                           int p) {
  if (graphs.empty()) throw Error(ErrorCode::EmptyInput, "no graphs");
  if (relevants.size() + 1 != graphs.size())
    throw Error(ErrorCode::BadInput, "need one relevant graph per junction");
  std::vector<GraphSlot> slots;
  slots.reserve(2 * graphs.size() - 1);
  for (int i = 0; i < int(graphs.size()); ++i) {
    slots.push_back(graph_as_slot(graphs[i]));
    if (i + 1 == int(graphs.size())) break;
    GraphSlot mid = graph_as_slot(relevants[i].graph);
    for (int r = 0; r < relevants[i].size(); ++r) {
      mid.to_left[r] = relevants[i].iota1[r];
      mid.to_right[r] = relevants[i].iota2[r];
    }
    slots.push_back(std::move(mid));
  }
  return build_graph_zigzag(slots, p);
}

std::vector<ZigzagModule> graph_filtration(
    const std::vector<std::shared_ptr<const MultivectorField>>& fields,
    const std::vector<MorseDecomposition>& decompositions) {
  if (fields.empty()) throw Error(ErrorCode::EmptyInput, "no fields");
  if (fields.size() != decompositions.size())
    throw Error(ErrorCode::BadInput, "one decomposition per field required");
  int p = fields[0]->characteristic();
  std::vector<ConleyMorseGraph> graphs;
  for (int i = 0; i < int(fields.size()); ++i)
    graphs.push_back(conley_morse_graph(*fields[i], decompositions[i].N, decompositions[i]));
  std::vector<RelevantCMGraph> relevants;
  for (int i = 0; i + 1 < int(fields.size()); ++i) {
    auto f12 = std::make_shared<const MultivectorField>(
        intersect_fields(*fields[i], *fields[i + 1]));
    SimplexSet ncap = decompositions[i].N & decompositions[i + 1].N;
    MorseDecomposition d12 = minimal_morse_decomposition(*f12, ncap);
    relevants.push_back(relevant_cm_graph(std::move(f12), d12, *fields[i], decompositions[i],
                                          graphs[i], *fields[i + 1], decompositions[i + 1],
                                          graphs[i + 1]));
  }
  return graph_filtration(graphs, relevants, p);
}

CombinedBarcode eliminate_redundancies(const std::vector<FiltrationSequence>& filtrations,
                                       const std::vector<std::vector<Bar>>& barcodes) {
  if (barcodes.size() != filtrations.size())
    throw Error(ErrorCode::BadInput, "one barcode per filtration required");
  int n = int(filtrations.size());

  std::set<int> dims;
  for (const auto& bars : barcodes)
    for (const Bar& bar : bars) dims.insert(bar.dim);

  CombinedBarcode out;
  for (int dim : dims) {
    // one forbidden ledger per dimension, keyed by (filtration, a, b)
    std::set<std::tuple<int, int, int>> forbidden;
    for (int i = 0; i < n; ++i) {
      for (const Bar& bar : barcodes[i]) {
        if (bar.dim != dim) continue;
        auto [a, b] = closure_steps(bar, filtrations[i].start);
        bool redundant = false;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          if (forbidden.count({j, a, b})) continue;
          if (!subfiltration_equal(filtrations[i], filtrations[j], a, b)) continue;
          redundant = true;
          forbidden.insert({i, a, b});
        }
        if (!redundant) {
          Bar abs = bar;
          abs.birth += 2 * filtrations[i].start;
          abs.death += 2 * filtrations[i].start;
          out.conley_bars.push_back(TaggedBar{i, abs});
        }
      }
    }
  }
  std::sort(out.conley_bars.begin(), out.conley_bars.end(),
            [](const TaggedBar& x, const TaggedBar& y) {
              return std::tie(x.bar.dim, x.bar.birth, x.bar.death, x.filtration) <
                     std::tie(y.bar.dim, y.bar.birth, y.bar.death, y.filtration);
            });
  return out;
}

CombinedBarcode full_barcode(const PipelineInput& input) {
  if (input.fields.empty()) throw Error(ErrorCode::EmptyInput, "no fields");
  int n = int(input.fields.size());
  const MultivectorField& f0 = *input.fields[0];
  const SimplicialComplex& K = f0.complex();
  int p = f0.characteristic();
  for (const auto& f : input.fields) {
    if (!f->same_complex(f0))
      throw Error(ErrorCode::DifferentComplex, "fields live on different complexes");
    if (f->characteristic() != p)
      throw Error(ErrorCode::BadInput, "fields use different characteristics");
  }

  std::vector<SimplexSet> isolating;
  if (input.isolating.size() == 1) {
    isolating.assign(n, input.isolating[0]);
  } else if (int(input.isolating.size()) == n) {
    isolating = input.isolating;
  } else {
    throw Error(ErrorCode::BadInput, "need one isolating set, or one per field");
  }
  for (const SimplexSet& N : isolating)
    if (!is_closed(K, N))
      throw Error(ErrorCode::NotClosed, "isolating set not closed", {mouth(K, N).first()});

  std::vector<MorseDecomposition> decomps;
  if (input.decompositions.empty()) {
    for (int i = 0; i < n; ++i)
      decomps.push_back(minimal_morse_decomposition(*input.fields[i], isolating[i]));
  } else {
    if (int(input.decompositions.size()) != n)
      throw Error(ErrorCode::BadInput, "one decomposition per field required");
    for (int i = 0; i < n; ++i)
      decomps.push_back(assemble_morse_decomposition(*input.fields[i], isolating[i],
                                                     input.decompositions[i]));
  }

  std::vector<std::vector<IndexPair>> pairs(n);
  for (int i = 0; i < n; ++i)
    for (const SimplexSet& M : decomps[i].sets) {
      IndexPair ip = index_pair_pf(*input.fields[i], isolating[i], M);
      if (input.thicken_rounds > 0)
        ip = thicken_index_pair(*input.fields[i], ip, decomps[i], input.thicken_rounds);
      pairs[i].push_back(std::move(ip));
    }

  bool same_n = true;
  for (int i = 1; i < n && same_n; ++i) same_n = isolating[i] == isolating[0];
  std::vector<FiltrationSequence> seqs = same_n ? find_conley_morse_filtrations(decomps, pairs)
                                                : changing_n_sequences(decomps, pairs);

  std::vector<std::vector<Bar>> barcodes;
  barcodes.reserve(seqs.size());
  for (const FiltrationSequence& seq : seqs) {
    std::vector<Bar> bars;
    for (const ZigzagModule& m : build_relative_zigzag(K, seq.pairs, seq.gap_pairs, p)) {
      std::vector<Bar> part = interval_decompose(m);
      bars.insert(bars.end(), part.begin(), part.end());
    }
    std::sort(bars.begin(), bars.end(), [](const Bar& x, const Bar& y) {
      return std::tie(x.dim, x.birth, x.death) < std::tie(y.dim, y.birth, y.death);
    });
    barcodes.push_back(std::move(bars));
  }

  CombinedBarcode out = eliminate_redundancies(seqs, barcodes);
  out.filtrations = std::move(seqs);
  out.num_steps = n;
  out.p = p;

  for (int i = 0; i < n; ++i)
    out.cm_graphs.push_back(conley_morse_graph(*input.fields[i], isolating[i], decomps[i]));
  for (int i = 0; i + 1 < n; ++i) {
    auto f12 = std::make_shared<const MultivectorField>(
        intersect_fields(*input.fields[i], *input.fields[i + 1]));
    SimplexSet ncap = isolating[i] & isolating[i + 1];
    MorseDecomposition d12 = minimal_morse_decomposition(*f12, ncap);
    out.relevant_graphs.push_back(relevant_cm_graph(std::move(f12), d12, *input.fields[i],
                                                    decomps[i], out.cm_graphs[i],
                                                    *input.fields[i + 1], decomps[i + 1],
                                                    out.cm_graphs[i + 1]));
  }
  for (const ZigzagModule& m : graph_filtration(out.cm_graphs, out.relevant_graphs, p)) {
    std::vector<Bar> part = interval_decompose(m);
    out.graph_bars.insert(out.graph_bars.end(), part.begin(), part.end());
  }
  std::sort(out.graph_bars.begin(), out.graph_bars.end(), [](const Bar& x, const Bar& y) {
    return std::tie(x.dim, x.birth, x.death) < std::tie(y.dim, y.birth, y.death);
  });
  return out;
}

}  // namespace cmg
