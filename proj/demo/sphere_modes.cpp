// Spheroidal mode chart of the stock 250 um sphere, plus the frequency and
// coupling trends with diameter.

#include <cstdio>

#include "magmech/magmech.hpp"

using namespace magmech;

int main() {
  const ElasticSphere sphere = yig_effective();
  std::printf("sphere: D = %.0f um, v_L = %.0f m/s, v_T = %.0f m/s\n",
              sphere.diameter * 1e6, sphere.v_longitudinal, sphere.v_transverse);

  std::printf("\nlowest spheroidal families (degeneracy 2l+1 each):\n");
  for (const auto& m : mode_catalog(sphere, 3, 2))
    if (m.m_a == 0)
      std::printf("  S_{%d,%d}: %8.3f MHz\n", m.n, m.l, m.frequency / 1e6);

  std::printf("\nS_{1,2} frequency and coupling vs diameter:\n");
  for (double d_um : {100.0, 250.0, 500.0, 1000.0}) {
    ElasticSphere s = sphere;
    s.diameter = d_um * 1e-6;
    std::printf("  D = %6.0f um: f = %8.3f MHz, g_mb = %.2f mHz\n", d_um,
                spheroidal_frequency(s, 1, 2) / 1e6,
                1e3 * rad_to_hz(coupling_vs_diameter(s.diameter)));
  }
  return 0;
}
