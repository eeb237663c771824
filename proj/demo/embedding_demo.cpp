// Three-element chain p0 > r > q born at 0, 3/10, 3/5: its poset barcode next to the
// persistence of the suspension complex and of the order complex.

#include <iostream>

#include "seqbar/export.hpp"
#include "seqbar/persistence.hpp"

using namespace seqbar;

namespace {

void print(const char* title, const std::vector<PersistenceBar>& bars) {
  std::cout << title << "\n";
  for (const auto& b : bars)
    std::cout << "  H" << b.dim << "  (" << to_string(b.birth) << ", " << death_string(b.death) << ")"
              << (b.multiplicity > 1 ? "  x" + std::to_string(b.multiplicity) : "") << "\n";
}

}  // namespace

int main() {
  FinitePoset chain({"p0", "r", "q"}, {{"r", "p0"}, {"q", "r"}});
  FilteredPoset fp(chain, {0, Rational(3, 10), Rational(3, 5)});

  std::cout << "poset barcode\n";
  for (const auto& b : poset_barcode(fp))
    std::cout << "  " << fp.poset.name(b.element) << "  [" << to_string(b.birth) << ", " << to_string(b.death)
              << (b.closed_at_end ? "]" : ")") << "\n";

  const auto susp = suspension_complex(fp);
  std::cout << "\nsuspension complex: " << susp.size() << " cells\n";
  print("persistence", persistence_barcode(susp));
  print("\norder complex persistence", persistence_barcode(order_complex(fp)));

  for (auto kind : {ComplexKind::suspension, ComplexKind::order}) {
    const auto rep = verify_embedding(fp, {}, kind);
    std::cout << "\n" << to_string(kind) << " complex:";
    for (const auto& e : rep.entries) std::cout << "  " << e.name << (e.matched ? " matched" : " unmatched");
    std::cout << "\n";
  }
  return 0;
}
