// Splits T = diag(1, j) along its two spectral pieces, the point {1} and the
// unit sphere of imaginary units, and evaluates exp(T) by contour integration.

#include <iomanip>
#include <iostream>

#include "qspec.hpp"

namespace {

void print(const char* name, const qspec::QMatrix& m) {
  std::cout << name << ":\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    std::cout << "  ";
    for (std::size_t c = 0; c < m.size(); ++c) std::cout << m(r, c) << "  ";
    std::cout << '\n';
  }
}

}  // namespace

int main() {
  using namespace qspec;
  const QMatrix t = QMatrix::diagonal({1.0, Quaternion::j()});

  const SSpectrum spectrum = s_spectrum(t);
  std::cout << std::setprecision(6) << "S-spectrum spheres (s0, s1, mult):\n";
  for (const auto& sp : spectrum.spheres) {
    std::cout << "  (" << sp.s0 << ", " << sp.s1 << ", " << sp.multiplicity << ")\n";
  }

  const Contour contour = build_contour(spectrum, ImaginaryUnit::i(), 0.3);
  for (std::size_t cl = 0; cl < cluster_count(contour); ++cl) {
    const RieszProjection proj = riesz_projector(t, select_spheres(contour, cluster_spheres(contour, cl)));
    std::cout << "cluster " << cl << ' ';
    print("projector", proj.projector);
  }

  print("exp(T)", apply_function(exp_series(20), t, contour).value);
  return 0;
}
