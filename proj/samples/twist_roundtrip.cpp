// Twists φ₀ by a rational point (c, ω), splits the result into types and
// recovers the parameters again.

#include <iostream>

#include "g2kit/g2kit.hpp"

using namespace g2kit;
using Q = Rational;

int main() {
  auto s = standard_structure<Q>();
  KForm<Q> omega(1);
  omega.coeff(0) = from_ratio<Q>(2, 7);
  omega.coeff(3) = from_ratio<Q>(3, 7);
  TwistParams<Q> p(from_ratio<Q>(6, 7), omega);  // 36 + 4 + 9 = 49

  KForm<Q> phit = twist(s, p);
  std::cout << "twisted form: " << kform_to_json(phit).dump() << "\n";

  auto induced = metric_from_phi(phit);
  std::cout << "same metric: " << (induced.metric.matrix() == s.metric().matrix() ? "yes" : "no") << "\n";

  auto d = decompose3(phit, s);
  std::cout << "|p1|^2 = " << to_string(s.inner(d.p1, d.p1)) << ", |p7|^2 = " << to_string(s.inner(d.p7, d.p7))
            << ", |p27|^2 = " << to_string(s.inner(d.p27, d.p27)) << "\n";

  auto back = recover(s, phit);
  std::cout << "recovered: " << twist_params_to_json(back).dump() << "\n";
  return antipodally_equal(back, p) ? 0 : 1;
}
