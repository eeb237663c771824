// Five-element example: births in both filtrations, the barcode, and Min(P_t) on a grid.
//
//   worked_example [DATASET_JSON]

#include <iostream>
#include <string>

#include "seqbar/ingest.hpp"
#include "seqbar/sequents.hpp"

using namespace seqbar;

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : std::string(SEQBAR_DATA_DIR) + "/worked_example.json";
  try {
    const auto ds = load_dataset(path);
    const auto u = enumerate_sequents(ds.map.universe());
    const auto one = compute_births(u, ds.map, FiltrationKind::I);
    const auto two = compute_births(u, ds.map, FiltrationKind::II);

    std::cout << "sequent                 birth I\t  birth II\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::string label = u.label(u[i]);
      std::size_t width = 0;  // code points, not bytes
      for (unsigned char ch : label) width += (ch & 0xC0) != 0x80;
      std::cout << label << std::string(width < 24 ? 24 - width : 1, ' ') << to_string(one[i]) << "\t  "
                << to_string(two[i]) << "\n";
    }

    auto bars = sequent_barcode(u, two);
    rank_bars(u, bars);
    std::cout << "\nFiltration II barcode, longest first\n";
    for (const auto& b : bars)
      std::cout << "  " << u.label(b.sequent) << "  [" << to_string(b.birth) << ", " << to_string(b.death)
                << (b.closed_at_end ? "]" : ")") << "  length " << to_string(b.length()) << "\n";

    std::cout << "\nminimal elements\n";
    for (int k = 0; k <= 5; ++k) {
      const Rational t(k, 5);
      std::cout << "  t=" << to_string(t) << ":";
      for (const auto& s : min_elements(u, two, t)) std::cout << "  " << u.label(s);
      std::cout << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
