// Writes the synthetic DepMap-layout CSVs used by the end-to-end tests.
//
//   make_depmap_fixture OUT_DIR [SEED] [LINES]

#include <cstdlib>
#include <iostream>
#include <string>

#include "seqbar/export.hpp"
#include "seqbar/ingest.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " OUT_DIR [SEED] [LINES]\n";
    return 2;
  }
  const std::string dir = argv[1];
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2021;
  const std::size_t lines = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 120;
  try {
    const auto f = seqbar::synthetic_depmap(seed, lines);
    seqbar::write_atomic(dir + "/gene_dependency.csv", f.dependency);
    seqbar::write_atomic(dir + "/mutations_bool_hotspot.csv", f.hotspot);
    seqbar::write_atomic(dir + "/mutations_bool_damaging.csv", f.damaging);
    seqbar::write_atomic(dir + "/mutations_bool_nonconserving.csv", f.nonconserving);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
