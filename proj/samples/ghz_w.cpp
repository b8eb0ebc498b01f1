// Entanglement eigenvalue of the three-qubit GHZ and W states.
// Known values: G(GHZ) = 1/sqrt(2), G(W) = 2/3.
#include <cmath>
#include <cstdio>

#include "ueig/quantum.hpp"

int main() {
  using ueig::cplx;
  const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
  std::vector<cplx> ghz(8, 0.0), w(8, 0.0);
  ghz[0] = ghz[7] = r2;
  w[1] = w[2] = w[4] = r3;

  for (auto [name, amps, expect] : {std::tuple{"GHZ", ghz, r2}, std::tuple{"W", w, 2.0 / 3.0}}) {
    const ueig::GeometricMeasure g = ueig::geometric_measure(ueig::PureState({2, 2, 2}, amps));
    std::printf("%-3s route %-7s G %.10f (expected %.10f)  E_G %.10f  bound %.10f  %s\n", name,
                ueig::to_string(g.pipeline.route), g.G, expect, g.E_G, g.pipeline.upper_bound,
                g.pipeline.certified ? "certified" : "not certified");
  }
  return 0;
}
