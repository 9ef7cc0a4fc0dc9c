#include "doctest.h"

#include "boxlab/cyclotomic.hpp"
#include "boxlab/errors.hpp"

#include <cmath>
#include <numeric>

using namespace boxlab;

TEST_CASE("small cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<std::int64_t>{-1, 1});
  CHECK(cyclotomic_polynomial(6) == std::vector<std::int64_t>{1, -1, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<std::int64_t>{1, 0, -1, 0, 1});
  // first polynomial with a coefficient outside {-1, 0, 1}
  const auto& p105 = cyclotomic_polynomial(105);
  CHECK(std::count(p105.begin(), p105.end(), -2) == 2);
  CHECK_THROWS_AS(cyclotomic_polynomial(0), LabError);
  CHECK_THROWS_AS(cyclotomic_polynomial(10001), LabError);
}

TEST_CASE("degree of Phi_m is the totient") {
  for (int m = 1; m <= 2000; ++m) {
    int direct = 0;
    for (int k = 1; k <= m; ++k)
      if (std::gcd(k, m) == 1) ++direct;
    CHECK(static_cast<int>(cyclotomic_polynomial(m).size()) - 1 == direct);
    CHECK(euler_phi(m) == direct);
  }
}

TEST_CASE("cosines as field elements") {
  CHECK(cos_as_element(1, 2, 2).is_zero());
  const auto half = cos_as_element(1, 3, 3);
  CHECK(half.coeffs()[0] == mpq_class(1, 2));
  for (std::size_t i = 1; i < half.coeffs().size(); ++i) CHECK(half.coeffs()[i] == 0);

  const auto c = cos_as_element(1, 5, 5);
  const auto field = cyclotomic_field(10);
  const auto golden = c * c * mpq_class(4) - c * mpq_class(2) - CyclotomicElement::rational(field, 1);
  CHECK(golden.is_zero());
  CHECK_FALSE(c.is_zero());
  CHECK_THROWS_AS(cos_as_element(1, 3, 5), LabError);
}

TEST_CASE("numeric evaluation matches the cosine sums") {
  for (const auto& ps : std::vector<std::vector<int>>{{5, 7}, {3, 5, 7}, {5, 7, 11}, {3, 5, 7, 11}}) {
    const int P = std::accumulate(ps.begin(), ps.end(), 1, std::multiplies<>());
    if (P > 1155) continue;
    for (int trial = 0; trial < 20; ++trial) {
      CyclotomicElement sum(cyclotomic_field(2 * P));
      double expect = 0.0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const int n = 1 + (trial * 7 + static_cast<int>(i) * 3) % (ps[i] - 1);
        sum += cos_as_element(n, ps[i], P);
        expect += std::cos(M_PI * n / ps[i]);
      }
      const auto v = sum.evaluate();
      CHECK(std::abs(v.real() - expect) <= 1e-12);
      CHECK(std::abs(v.imag()) <= 1e-12);
    }
  }
}

TEST_CASE("symmetric orbits cancel exactly") {
  for (int p : {5, 7, 9, 11})
    for (int n = 1; n < p; ++n) CHECK((cos_as_element(n, p, p) + cos_as_element(p - n, p, p)).is_zero());
}

TEST_CASE("zero tests and exhaustive scans") {
  CHECK(cos_sum_is_zero({2}, {1}));
  CHECK(cos_sum_is_zero({3, 3}, {1, 2}));
  CHECK_FALSE(cos_sum_is_zero({5, 7}, {2, 3}));

  const auto a = verify_lemma5({5, 7});
  CHECK(a.admissible);
  CHECK(a.tuples == 24);
  CHECK(a.zeros == 0);

  const auto b = verify_lemma5({3, 5});
  CHECK_FALSE(b.admissible);
  CHECK(b.tuples == 8);

  const auto c = verify_lemma5({5, 7, 11}, 4);
  CHECK(c.tuples == 240);
  CHECK(c.zeros == 0);

  CHECK_THROWS_AS(cos_sum_is_zero({71, 73}, {1, 1}), LabError);
}
