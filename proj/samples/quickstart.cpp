// Builds the lambda = 1/3 comb, integrates along one connecting curve and
// evaluates the dimension bound at the lemma constant.

#include <cstdio>

#include "combdim/combdim.hpp"

int main() {
  using namespace combdim;
  const double lambda = 1.0 / 3.0;
  const double p = 1.2;
  const CombDomain domain(CantorParams(lambda, 20), 20);

  const Point2 x{0.40, 0.05};
  const Point2 y{0.60, -0.03};
  const Connection conn = connect(x, y, domain);
  const IntegralResult r = polyline_integral(conn.curve, Exponent(p), domain);
  std::printf("case %s, %zu segments, integral %.10g (+- %.2g), ratio %.6g\n", to_string(conn.kind),
              conn.curve.segment_count(), r.value, r.error, r.value / std::pow(distance(x, y), 2.0 - p));

  const double c_lemma = curve_constant_bound(p, lambda, 9.0);
  const BoundReport b = main_bound(p, c_lemma);
  std::printf("C <= %.6g, bound %.9f, Cantor dimension %.9f\n", c_lemma, b.rhs, CantorParams(lambda, 1).dimension());

  const TwoSidedCertificate cert = detect(domain, {1.0 / 3.0, 0.0}, 3, 8, 256);
  std::printf("(1/3, 0): %s\n", to_string(cert.verdict));
}
