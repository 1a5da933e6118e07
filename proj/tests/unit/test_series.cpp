#include <vector>

#include "clusterexp/errors.hpp"
#include "clusterexp/series.hpp"
#include "doctest.h"

using namespace clusterexp;

TEST_SUITE("series") {
  TEST_CASE("product keeps the operand order") {
    const TruncatedSeries a({1.0, 1.0}, 3);  // 1 + z
    const TruncatedSeries p = a * a * a * a;  // (1+z)^4 through z^3
    CHECK(p.order() == 3);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 4.0);
    CHECK(p[2] == 6.0);
    CHECK(p[3] == 4.0);
  }

  TEST_CASE("division inverts multiplication") {
    const TruncatedSeries a({2.0, -1.0, 0.5, 3.0}, 3);
    const TruncatedSeries b({1.0, 4.0, 4.5, -2.0}, 3);
    const TruncatedSeries q = (a * b) / b;
    for (int k = 0; k <= 3; ++k) CHECK(q[k] == doctest::Approx(a[k]).epsilon(1e-14));
  }

  TEST_CASE("geometric series") {
    const TruncatedSeries one = TruncatedSeries::constant(1.0, 5);
    const TruncatedSeries q = one / TruncatedSeries({1.0, -1.0}, 5);
    for (int k = 0; k <= 5; ++k) CHECK(q[k] == 1.0);
    CHECK(q.evaluate(0.5) == doctest::Approx(1.96875));
    CHECK(TruncatedSeries({1.0, -2.0}, 1).evaluate_abs(0.5) == 2.0);
  }

  TEST_CASE("monomial past the order is zero") {
    const auto m = TruncatedSeries::monomial(4, 2);
    CHECK(m.order() == 2);
    for (int k = 0; k <= 2; ++k) CHECK(m[k] == 0.0);
  }

  TEST_CASE("zero constant term cannot divide") {
    CHECK_THROWS_AS(TruncatedSeries::constant(1.0, 2) / TruncatedSeries({0.0, 1.0}, 2), DomainError);
  }
}
