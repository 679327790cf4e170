#ifndef CMG_IO_HPP
#define CMG_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "cmg/pipeline.hpp"

namespace cmg {

// One parsed problem instance: a complex, one field per step, isolating
// sets (one shared or one per step), and pipeline options.
struct InputBundle {
  std::shared_ptr<const SimplicialComplex> complex;
  std::vector<std::shared_ptr<const MultivectorField>> fields;
  std::vector<SimplexSet> isolating;                    // size 1 or fields.size()
  std::vector<std::vector<SimplexSet>> decompositions;  // optional override
  int characteristic = 2;
  int thicken = 0;
};

// Input schema (see docs/cli.md): {"complex": [[int,...],...],
// "fields": [[[int,...],...],...], "isolating": [int,...] | [[int,...],...],
// "char": int?, "thicken": int?, "decompositions": [[[int,...],...],...]?}.
// All simplex references are ids into the face-completed complex ordered by
// (dimension, lexicographic vertex tuple); vertex tuples are not accepted.
// Isolating sets that are not closed are closed automatically with a note
// written to `warn`. Type and JSON-shape faults surface as
// nlohmann::json::exception, semantic faults as cmg::Error.
InputBundle parse_bundle(const std::string& json_text, std::ostream& warn);

PipelineInput to_pipeline_input(const InputBundle& bundle);

// Renderers. Output bytes are deterministic for a fixed input.
std::string barcode_to_json(const CombinedBarcode& bc);
std::string barcode_to_svg(const CombinedBarcode& bc);

struct BarcodeOptions {
  std::optional<int> characteristic;  // overrides the bundle value when set
  std::optional<int> thicken;
  std::string json_path;  // empty or "-": write JSON to stdout
  std::string svg_path;   // empty: no SVG
};

// Command bodies shared by the executable and the tests. Exit codes:
// 0 success, 1 domain or validation failure, 2 unreadable or unparsable
// input. `field` selects a step by 0-based index; cmd_filtrations accepts
// -1 to mean "all steps".
int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_barcode(const std::string& path, const BarcodeOptions& opt, std::ostream& out,
                std::ostream& err);
int cmd_morse(const std::string& path, int field, std::ostream& out, std::ostream& err);
int cmd_cmgraph(const std::string& path, int field, std::ostream& out, std::ostream& err);
int cmd_filtrations(const std::string& path, int field, std::ostream& out, std::ostream& err);

}  // namespace cmg

#endif
