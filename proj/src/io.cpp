#include "cmg/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "cmg/dynamics.hpp"

namespace cmg {
namespace {

using njson = nlohmann::ordered_json;

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string witness_str(const Error& e, const SimplicialComplex* K) {
  if (e.witnesses.empty()) return "";
  std::string s = " [witness:";
  for (int id : e.witnesses) {
    s += " " + std::to_string(id);
    if (K && id >= 0 && id < K->size()) s += " " + K->label(id);
  }
  return s + "]";
}

// Shape faults (wrong JSON types, missing keys) surface as njson exceptions
// and map to exit 2; semantic faults are cmg::Error and map to exit 1. With
// `problems` set, semantic faults are recorded and parsing continues so a
// validation run can list all of them.
struct BundleParser {
  std::ostream& warn;
  std::vector<std::string>* problems = nullptr;
  std::optional<int> char_override;
  std::optional<int> thicken_override;
  InputBundle b;

  void fail(const Error& e, const std::string& where) {
    if (!problems) throw Error(e.code, where + ": " + e.what(), e.witnesses);
    problems->push_back(where + ": " + std::string(error_code_name(e.code)) + ": " + e.what() +
                        witness_str(e, b.complex.get()));
  }

  std::vector<int> id_list(const njson& arr) const {
    std::vector<int> ids = arr.get<std::vector<int>>();
    int n = b.complex->size();
    for (int id : ids)
      if (id < 0 || id >= n)
        throw Error(ErrorCode::BadInput, "simplex id " + std::to_string(id) +
                                             " out of range (complex has " + std::to_string(n) +
                                             " simplices)");
    return ids;
  }

  InputBundle run(const std::string& text) {
    njson j = njson::parse(text);
    if (!j.is_object()) j.at("complex");  // force a type fault on non-objects

    for (const auto& item : j.items()) {
      const std::string& k = item.key();
      if (k != "complex" && k != "fields" && k != "isolating" && k != "char" &&
          k != "thicken" && k != "decompositions")
        fail(Error(ErrorCode::BadInput, "unknown key \"" + k + "\""), "input");
    }

    b.characteristic = char_override              ? *char_override
                       : j.contains("char")       ? j.at("char").get<int>()
                                                  : 2;
    if (!is_prime(b.characteristic)) {
      fail(Error(ErrorCode::BadInput,
                 "characteristic must be a prime, got " + std::to_string(b.characteristic)),
           "char");
      b.characteristic = 2;
    }
    b.thicken = thicken_override          ? *thicken_override
                : j.contains("thicken")   ? j.at("thicken").get<int>()
                                          : 0;
    if (b.thicken < 0) {
      fail(Error(ErrorCode::BadInput, "thicken must be >= 0, got " + std::to_string(b.thicken)),
           "thicken");
      b.thicken = 0;
    }

    auto tuples = j.at("complex").get<std::vector<std::vector<int>>>();
    try {
      b.complex = std::make_shared<const SimplicialComplex>(build_complex(tuples));
    } catch (const Error& e) {
      fail(e, "complex");
      return b;  // nothing downstream is checkable without the complex
    }

    auto jfields = j.at("fields").get<std::vector<njson>>();
    size_t num_fields = jfields.size();
    for (size_t i = 0; i < num_fields; ++i) {
      try {
        std::vector<std::vector<int>> part;
        for (const auto& v : jfields[i].get<std::vector<njson>>()) part.push_back(id_list(v));
        b.fields.push_back(
            std::make_shared<MultivectorField>(build_field(b.complex, part, b.characteristic)));
      } catch (const Error& e) {
        fail(e, "fields[" + std::to_string(i) + "]");
      }
    }

    const njson& ji = j.at("isolating");
    std::vector<njson> iso_lists;
    if (ji.is_array() && (ji.empty() || !ji.front().is_array()))
      iso_lists.push_back(ji);  // one shared id list
    else
      iso_lists = ji.get<std::vector<njson>>();
    if (iso_lists.size() != 1 && iso_lists.size() != num_fields)
      fail(Error(ErrorCode::BadInput,
                 "isolating must give one set or one per field (got " +
                     std::to_string(iso_lists.size()) + " for " + std::to_string(num_fields) +
                     " fields)"),
           "isolating");
    for (size_t i = 0; i < iso_lists.size(); ++i) {
      try {
        SimplexSet s = make_set(*b.complex, id_list(iso_lists[i]));
        if (!is_closed(*b.complex, s)) {
          SimplexSet c = closure(*b.complex, s);
          warn << "note: isolating set " << i << " is not closed; adding";
          (c - s).for_each([&](int id) { warn << " " << id << " " << b.complex->label(id); });
          warn << "\n";
          s = std::move(c);
        }
        b.isolating.push_back(std::move(s));
      } catch (const Error& e) {
        fail(e, "isolating[" + std::to_string(i) + "]");
      }
    }

    if (j.contains("decompositions")) {
      auto jd = j.at("decompositions").get<std::vector<njson>>();
      if (jd.size() != num_fields) {
        fail(Error(ErrorCode::BadInput, "decompositions must give one list of Morse sets per "
                                        "field (got " +
                                            std::to_string(jd.size()) + " for " +
                                            std::to_string(num_fields) + " fields)"),
             "decompositions");
      } else {
        for (size_t i = 0; i < jd.size(); ++i) {
          try {
            std::vector<SimplexSet> sets;
            for (const auto& v : jd[i].get<std::vector<njson>>())
              sets.push_back(make_set(*b.complex, id_list(v)));
            b.decompositions.push_back(std::move(sets));
          } catch (const Error& e) {
            fail(e, "decompositions[" + std::to_string(i) + "]");
          }
        }
      }
    }
    return b;
  }
};

int read_file(const std::string& path, std::string& out, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read " << path << "\n";
    return 2;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return 0;
}

void report(const Error& e, const SimplicialComplex* K, std::ostream& err) {
  err << error_code_name(e.code) << ": " << e.what() << witness_str(e, K) << "\n";
}

njson bar_json(const Bar& bar, const std::string& source) {
  njson o;
  o["dim"] = bar.dim;
  o["birth_pos"] = bar.birth;
  o["death_pos"] = bar.death;
  o["birth_field"] = bar.birth_field();
  o["death_field"] = bar.death_field();
  o["source"] = source;
  return o;
}

njson filtration_json(const FiltrationSequence& f) {
  njson o;
  o["start_field"] = f.start;
  o["morse_indices"] = f.morse_indices;
  njson steps = njson::array();
  for (int i = 0; i < f.length(); ++i) {
    njson s;
    s["field"] = f.start + i;
    s["morse_index"] = f.morse_indices[i];
    s["P"] = f.pairs[i].P.ids();
    s["E"] = f.pairs[i].E.ids();
    steps.push_back(std::move(s));
  }
  o["steps"] = std::move(steps);
  njson gaps = njson::array();
  for (const IndexPair& g : f.gap_pairs) {
    njson s;
    s["P"] = g.P.ids();
    s["E"] = g.E.ids();
    gaps.push_back(std::move(s));
  }
  o["gaps"] = std::move(gaps);
  return o;
}

njson cm_graph_json(const ConleyMorseGraph& g) {
  njson o;
  o["poincare"] = g.poincare;
  o["edges"] = g.edges;
  return o;
}

// Decomposition for one step: the override when the bundle carries one,
// otherwise the minimal decomposition.
MorseDecomposition step_decomposition(const InputBundle& b, int field, const SimplexSet& N) {
  const MultivectorField& f = *b.fields[field];
  if (!b.decompositions.empty())
    return assemble_morse_decomposition(f, N, b.decompositions[field]);
  return minimal_morse_decomposition(f, N);
}

SimplexSet isolating_of(const InputBundle& b, int field) {
  return b.isolating.size() == 1 ? b.isolating[0] : b.isolating[field];
}

void check_field_index(const InputBundle& b, int field) {
  if (field < 0 || field >= int(b.fields.size()))
    throw Error(ErrorCode::BadInput, "field index " + std::to_string(field) +
                                         " out of range (bundle has " +
                                         std::to_string(b.fields.size()) + " fields)");
}

}  // namespace

InputBundle parse_bundle(const std::string& json_text, std::ostream& warn) {
  BundleParser parser{warn};
  return parser.run(json_text);
}

PipelineInput to_pipeline_input(const InputBundle& bundle) {
  PipelineInput in;
  in.fields = bundle.fields;
  in.isolating = bundle.isolating;
  in.decompositions = bundle.decompositions;
  in.thicken_rounds = bundle.thicken;
  return in;
}

std::string barcode_to_json(const CombinedBarcode& bc) {
  njson root;
  root["num_steps"] = bc.num_steps;
  root["char"] = bc.p;
  njson gb = njson::array();
  for (const Bar& bar : bc.graph_bars) gb.push_back(bar_json(bar, "graph"));
  root["graph_bars"] = std::move(gb);
  njson cb = njson::array();
  for (const TaggedBar& tb : bc.conley_bars)
    cb.push_back(bar_json(tb.bar, "filtration:" + std::to_string(tb.filtration)));
  root["conley_bars"] = std::move(cb);
  njson fs = njson::array();
  for (const FiltrationSequence& f : bc.filtrations) fs.push_back(filtration_json(f));
  root["filtrations"] = std::move(fs);
  njson gs = njson::array();
  for (const ConleyMorseGraph& g : bc.cm_graphs) gs.push_back(cm_graph_json(g));
  root["cm_graphs"] = std::move(gs);
  return root.dump(2) + "\n";
}

std::string barcode_to_svg(const CombinedBarcode& bc) {
  const int unit = 56, left = 120, header = 36, rowh = 24, barh = 14, pad = 8;
  const int npos = std::max(1, 2 * bc.num_steps - 1);
  const int width = left + (npos - 1) * unit + 60;
  auto X = [&](int pos) { return left + (pos - 1) * unit; };
  static const char* palette[] = {"#88ccee", "#cc6677", "#ddcc77",
                                  "#117733", "#332288", "#aa4499"};

  struct Row {
    Bar bar;
    std::string tip;
  };
  struct Section {
    std::string label;
    std::vector<Row> rows;
  };
  auto group_by_dim = [](std::vector<Row> rows, const std::string& prefix) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tie(a.bar.dim, a.bar.birth, a.bar.death) <
             std::tie(b.bar.dim, b.bar.birth, b.bar.death);
    });
    std::vector<Section> out;
    for (Row& r : rows) {
      std::string label = prefix + "dim " + std::to_string(r.bar.dim);
      if (out.empty() || out.back().label != label) out.push_back({label, {}});
      out.back().rows.push_back(std::move(r));
    }
    return out;
  };

  auto interval_str = [](const Bar& bar) {
    return std::string(bar.birth_open ? "(" : "[") + std::to_string(bar.birth) + "," +
           std::to_string(bar.death) + (bar.death_open ? ")" : "]");
  };

  std::vector<Row> graph_rows, conley_rows;
  for (const Bar& bar : bc.graph_bars)
    graph_rows.push_back({bar, "graph dim " + std::to_string(bar.dim) + " " + interval_str(bar)});
  for (const TaggedBar& tb : bc.conley_bars)
    conley_rows.push_back({tb.bar, "dim " + std::to_string(tb.bar.dim) + " " + interval_str(tb.bar) +
                                       " filtration " + std::to_string(tb.filtration)});

  std::ostringstream body;
  int y = header;
  auto emit_section = [&](const Section& sec) {
    int mid = y + int(sec.rows.size()) * rowh / 2;
    body << "<text x=\"8\" y=\"" << mid + 4 << "\">" << sec.label << "</text>\n";
    for (const Row& r : sec.rows) {
      int x0 = X(r.bar.birth) - pad, x1 = X(r.bar.death) + pad;
      body << "<rect x=\"" << x0 << "\" y=\"" << y + (rowh - barh) / 2 << "\" width=\""
           << x1 - x0 << "\" height=\"" << barh << "\" rx=\"4\" fill=\""
           << palette[r.bar.dim % 6] << "\" stroke=\"#333\"><title>" << r.tip
           << "</title></rect>\n";
      y += rowh;
    }
    y += 6;
  };

  for (const Section& sec : group_by_dim(std::move(graph_rows), "graph ")) emit_section(sec);
  body << "<line x1=\"0\" y1=\"" << y << "\" x2=\"" << width << "\" y2=\"" << y
       << "\" stroke=\"#888\" stroke-dasharray=\"6 3\"/>\n";
  y += 14;
  for (const Section& sec : group_by_dim(std::move(conley_rows), "")) emit_section(sec);
  const int height = y + 10;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<style>text{font:12px monospace;fill:#222}</style>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  for (int s = 1; s <= std::max(1, bc.num_steps); ++s) {
    int x = X(2 * s - 1);
    svg << "<line x1=\"" << x << "\" y1=\"" << header - 10 << "\" x2=\"" << x << "\" y2=\""
        << height - 6 << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << header - 16
        << "\" text-anchor=\"middle\">step " << s << "</text>\n";
  }
  svg << body.str() << "</svg>\n";
  return svg.str();
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  std::string text;
  if (int rc = read_file(path, text, err)) return rc;
  std::vector<std::string> problems;
  BundleParser parser{err, &problems};
  InputBundle b;
  try {
    b = parser.run(text);
  } catch (const njson::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
  if (!problems.empty()) {
    out << "invalid: " << problems.size() << " problem(s)\n";
    for (const std::string& p : problems) out << "  - " << p << "\n";
    return 1;
  }
  out << "ok: complex with " << b.complex->size() << " simplices (top dimension "
      << b.complex->top_dim() << "), " << b.fields.size() << " field(s), "
      << b.isolating.size() << " isolating set(s), char " << b.characteristic << ", thicken "
      << b.thicken << "\n";
  return 0;
}

int cmd_barcode(const std::string& path, const BarcodeOptions& opt, std::ostream& out,
                std::ostream& err) {
  std::string text;
  if (int rc = read_file(path, text, err)) return rc;
  std::shared_ptr<const SimplicialComplex> K;
  try {
    BundleParser parser{err, nullptr, opt.characteristic, opt.thicken};
    InputBundle b = parser.run(text);
    K = b.complex;
    CombinedBarcode bc = full_barcode(to_pipeline_input(b));
    std::string json = barcode_to_json(bc);
    if (opt.json_path.empty() || opt.json_path == "-") {
      out << json;
    } else {
      std::ofstream f(opt.json_path, std::ios::binary);
      if (!f) {
        err << "error: cannot write " << opt.json_path << "\n";
        return 2;
      }
      f << json;
    }
    if (!opt.svg_path.empty()) {
      std::ofstream f(opt.svg_path, std::ios::binary);
      if (!f) {
        err << "error: cannot write " << opt.svg_path << "\n";
        return 2;
      }
      f << barcode_to_svg(bc);
    }
    return 0;
  } catch (const Error& e) {
    report(e, K.get(), err);
    return 1;
  } catch (const njson::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_morse(const std::string& path, int field, std::ostream& out, std::ostream& err) {
  std::string text;
  if (int rc = read_file(path, text, err)) return rc;
  std::shared_ptr<const SimplicialComplex> K;
  try {
    BundleParser parser{err};
    InputBundle b = parser.run(text);
    K = b.complex;
    check_field_index(b, field);
    const MultivectorField& f = *b.fields[field];
    SimplexSet N = isolating_of(b, field);
    njson sets = njson::array();
    if (!b.decompositions.empty()) {
      MorseDecomposition d = assemble_morse_decomposition(f, N, b.decompositions[field]);
      for (const SimplexSet& M : d.sets) {
        bool crit = false;
        M.for_each([&](int id) { crit = crit || f.is_critical(f.vector_of(id)); });
        njson o;
        o["simplices"] = M.ids();
        o["kind"] = crit ? "critical" : "cycle";
        sets.push_back(std::move(o));
      }
    } else {
      MorseDecomposition d = minimal_morse_decomposition(f, N);
      std::vector<EssentialScc> sccs = essential_sccs(f, invariant_part(f, N));
      for (size_t k = 0; k < d.sets.size(); ++k) {
        njson o;
        o["simplices"] = d.sets[k].ids();
        o["kind"] =
            sccs[k].anchor_kind == EssentialScc::Anchor::CriticalVector ? "critical" : "cycle";
        sets.push_back(std::move(o));
      }
    }
    out << sets.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    report(e, K.get(), err);
    return 1;
  } catch (const njson::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_cmgraph(const std::string& path, int field, std::ostream& out, std::ostream& err) {
  std::string text;
  if (int rc = read_file(path, text, err)) return rc;
  std::shared_ptr<const SimplicialComplex> K;
  try {
    BundleParser parser{err};
    InputBundle b = parser.run(text);
    K = b.complex;
    check_field_index(b, field);
    const MultivectorField& f = *b.fields[field];
    SimplexSet N = isolating_of(b, field);
    MorseDecomposition d = step_decomposition(b, field, N);
    ConleyMorseGraph g = conley_morse_graph(f, N, d);
    njson root;
    njson verts = njson::array();
    for (int k = 0; k < g.size(); ++k) {
      njson o;
      o["simplices"] = d.sets[k].ids();
      o["poincare"] = g.poincare[k];
      verts.push_back(std::move(o));
    }
    root["vertices"] = std::move(verts);
    root["edges"] = g.edges;
    out << root.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    report(e, K.get(), err);
    return 1;
  } catch (const njson::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_filtrations(const std::string& path, int field, std::ostream& out, std::ostream& err) {
  std::string text;
  if (int rc = read_file(path, text, err)) return rc;
  std::shared_ptr<const SimplicialComplex> K;
  try {
    BundleParser parser{err};
    InputBundle b = parser.run(text);
    K = b.complex;
    if (b.fields.empty()) throw Error(ErrorCode::EmptyInput, "no fields in bundle");
    if (field != -1) check_field_index(b, field);

    int n = int(b.fields.size());
    std::vector<MorseDecomposition> decomps;
    std::vector<std::vector<IndexPair>> pairs;
    for (int i = 0; i < n; ++i) {
      SimplexSet N = isolating_of(b, i);
      decomps.push_back(step_decomposition(b, i, N));
      std::vector<IndexPair> row;
      for (const SimplexSet& M : decomps.back().sets) {
        IndexPair ip = index_pair_pf(*b.fields[i], N, M);
        if (b.thicken > 0) ip = thicken_index_pair(*b.fields[i], ip, decomps.back(), b.thicken);
        row.push_back(std::move(ip));
      }
      pairs.push_back(std::move(row));
    }
    bool same_n = true;
    for (int i = 1; i < n; ++i) same_n = same_n && decomps[i].N == decomps[0].N;
    std::vector<FiltrationSequence> seqs = same_n ? find_conley_morse_filtrations(decomps, pairs)
                                                  : changing_n_sequences(decomps, pairs);
    njson arr = njson::array();
    for (const FiltrationSequence& s : seqs)
      if (field == -1 || (s.start <= field && field <= s.end())) arr.push_back(filtration_json(s));
    out << arr.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    report(e, K.get(), err);
    return 1;
  } catch (const njson::exception& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cmg
