#ifndef CMG_PIPELINE_HPP
#define CMG_PIPELINE_HPP

#include <memory>
#include <vector>

#include "cmg/conley.hpp"
#include "cmg/zigzag.hpp"

namespace cmg {

// One maximal feasible run of Morse sets through consecutive steps, with the
// index pairs of its steps and the intersection pairs of its gaps. Steps are
// 0-based field indices; 1-based "absolute" step s covers field s-1.
struct FiltrationSequence {
  int start = 0;                  // field index of the first step
  std::vector<int> morse_indices; // per step: Morse set index within that step
  std::vector<IndexPair> pairs;
  std::vector<IndexPair> gap_pairs;
  std::vector<std::shared_ptr<const MultivectorField>> gap_fields;

  int length() const { return int(pairs.size()); }
  int end() const { return start + length() - 1; }
  // absolute position of local zigzag position pos (1..2*length-1)
  int absolute(int pos) const { return pos + 2 * start; }
};

// Minimal Morse decomposition of the intersection field, filtered down to
// the sets that survive inside a Morse set of each flanking decomposition,
// with the containment maps and the induced graph structure.
struct RelevantCMGraph {
  std::shared_ptr<const MultivectorField> field;  // intersection field
  SimplexSet N;                                   // junction isolating set
  std::vector<SimplexSet> sets;                   // relevant Morse sets
  std::vector<int> iota1, iota2;                  // vertex -> flanking vertex
  ConleyMorseGraph graph;

  int size() const { return int(sets.size()); }
};

struct TaggedBar {
  int filtration = 0;  // index into the sequence list
  Bar bar;             // absolute positions

  bool operator==(const TaggedBar&) const = default;
};

struct CombinedBarcode {
  std::vector<TaggedBar> conley_bars;  // survivors of redundancy elimination
  std::vector<Bar> graph_bars;         // from the graph tower, absolute positions
  // context carried along for reporting
  std::vector<FiltrationSequence> filtrations;
  std::vector<ConleyMorseGraph> cm_graphs;
  std::vector<RelevantCMGraph> relevant_graphs;
  int num_steps = 0;
  int p = 2;
};

// All maximal feasible sequences: consecutive interiors must meet. Requires
// one pair per Morse set and a shared isolating set across the steps.
// Deterministic order: by (start, morse_indices).
std::vector<FiltrationSequence> find_conley_morse_filtrations(
    const std::vector<MorseDecomposition>& decompositions,
    const std::vector<std::vector<IndexPair>>& pairs);

// Per-step isolating sets: a link additionally needs both interiors inside
// N_i ∩ N_{i+1}; gap pairs are restrictions to that intersection, then
// intersected. With all N equal this reproduces find_conley_morse_filtrations
// exactly.
std::vector<FiltrationSequence> changing_n_sequences(
    const std::vector<MorseDecomposition>& decompositions,
    const std::vector<std::vector<IndexPair>>& pairs);

// Builds the relevant graph between two flanking steps. The precomputed
// overload reuses the caller's decompositions and graphs; d12 must be the
// minimal decomposition of the intersection field on the junction set d12.N.
RelevantCMGraph relevant_cm_graph(const MultivectorField& f1, const MultivectorField& f2,
                                  const SimplexSet& N);
RelevantCMGraph relevant_cm_graph(std::shared_ptr<const MultivectorField> f12,
                                  const MorseDecomposition& d12,
                                  const MultivectorField& f1, const MorseDecomposition& d1,
                                  const ConleyMorseGraph& g1,
                                  const MultivectorField& f2, const MorseDecomposition& d2,
                                  const ConleyMorseGraph& g2);

// The alternating tower of Conley-Morse graphs and relevant graphs, as
// zigzag modules in dimensions 0 and 1. Junction isolating sets are the
// intersections of the flanking ones.
std::vector<ZigzagModule> graph_filtration(
    const std::vector<std::shared_ptr<const MultivectorField>>& fields,
    const std::vector<MorseDecomposition>& decompositions);
std::vector<ZigzagModule> graph_filtration(const std::vector<ConleyMorseGraph>& graphs,
                                           const std::vector<RelevantCMGraph>& relevants, int p);

// Drops every bar whose source subfiltration reappears in another sequence,
// keeping exactly one representative per duplicated subfiltration. Barcodes
// arrive in local positions, survivors leave in absolute ones.
CombinedBarcode eliminate_redundancies(const std::vector<FiltrationSequence>& filtrations,
                                       const std::vector<std::vector<Bar>>& barcodes);

struct PipelineInput {
  std::vector<std::shared_ptr<const MultivectorField>> fields;
  std::vector<SimplexSet> isolating;  // one shared set, or one per field
  // optional: caller-chosen Morse sets per field; empty means minimal
  std::vector<std::vector<SimplexSet>> decompositions;
  int thicken_rounds = 0;
};

// End to end: decompositions, index pairs (optionally thickened), maximal
// sequences, per-sequence barcodes, redundancy elimination, graph tower.
CombinedBarcode full_barcode(const PipelineInput& input);

}  // namespace cmg

#endif
