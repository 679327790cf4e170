#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cmg/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Morse decompositions, Conley-Morse graphs, and zigzag barcodes for "
               "combinatorial multivector fields"};
  app.require_subcommand(1);

  std::string path;
  int field = 0;
  int filt_field = -1;
  int char_flag = 2;
  int thicken_flag = 0;
  cmg::BarcodeOptions opt;

  CLI::App* validate = app.add_subcommand("validate", "Check a bundle and report every violation");
  validate->add_option("file", path, "input bundle (JSON)")->required();

  CLI::App* barcode =
      app.add_subcommand("barcode", "Combined persistence barcode (JSON, optional SVG)");
  barcode->add_option("file", path, "input bundle (JSON)")->required();
  CLI::Option* char_opt =
      barcode->add_option("--char", char_flag, "coefficient field characteristic (prime)");
  CLI::Option* thicken_opt =
      barcode->add_option("--thicken", thicken_flag, "index pair thickening rounds");
  barcode->add_option("--json", opt.json_path, "write the JSON here instead of stdout");
  barcode->add_option("--svg", opt.svg_path, "write an SVG rendering here");

  CLI::App* morse = app.add_subcommand("morse", "Minimal Morse decomposition of one field");
  morse->add_option("file", path, "input bundle (JSON)")->required();
  morse->add_option("--field", field, "0-based field index (default 0)");

  CLI::App* cmgraph = app.add_subcommand("cmgraph", "Conley-Morse graph of one field");
  cmgraph->add_option("file", path, "input bundle (JSON)")->required();
  cmgraph->add_option("--field", field, "0-based field index (default 0)");

  CLI::App* filtrations =
      app.add_subcommand("filtrations", "Maximal sequences of continued Morse sets");
  filtrations->add_option("file", path, "input bundle (JSON)")->required();
  filtrations->add_option("--field", filt_field,
                          "only sequences whose span covers this field (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (validate->parsed()) return cmg::cmd_validate(path, std::cout, std::cerr);
  if (barcode->parsed()) {
    if (char_opt->count() > 0) opt.characteristic = char_flag;
    if (thicken_opt->count() > 0) opt.thicken = thicken_flag;
    return cmg::cmd_barcode(path, opt, std::cout, std::cerr);
  }
  if (morse->parsed()) return cmg::cmd_morse(path, field, std::cout, std::cerr);
  if (cmgraph->parsed()) return cmg::cmd_cmgraph(path, field, std::cout, std::cerr);
  if (filtrations->parsed()) return cmg::cmd_filtrations(path, filt_field, std::cout, std::cerr);
  return 2;
}
