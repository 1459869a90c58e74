#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zetares/error.hpp"
#include "zetares/resonance.hpp"
#include "zetares/resonator.hpp"

using namespace zr;

TEST_CASE("kernel and weight") {
  const WeightedKernel k = make_kernel(10000, 0.75);
  CHECK(k.lower == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(k.breakpoint == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(k.upper == 10000);
  CHECK_THROWS_AS(weight(5, k), DomainError);
  CHECK(weight(10, k) == doctest::Approx(3 - 10.0 / 10000));
  CHECK(weight(15, k) == doctest::Approx(3 - 15.0 / 10000));
  CHECK(weight(30, k) == doctest::Approx(1 - 30.0 / 10000));
  CHECK(weight(10000, k) == 0);
  CHECK_THROWS_AS(weight(10001, k), DomainError);
  CHECK(weight(20, k) - weight(std::nextafter(20.0, 21.0), k) == doctest::Approx(2.0));
  for (double t = 10; t <= 10000; t += 3.7) REQUIRE(weight(t, k) >= 0);
  CHECK_THROWS_AS(make_kernel(2, 0.6), DomainError);
}

TEST_CASE("frequency classes") {
  const double T = 10000;
  CHECK(classify_frequency(0.0, T, 0.75) == FrequencyClass::Type1);
  CHECK(classify_frequency(1e-4, T, 0.75) == FrequencyClass::Type1);
  CHECK(classify_frequency(1.0001e-4, T, 0.75) == FrequencyClass::Type2);
  CHECK(classify_frequency(0.05, T, 0.75) == FrequencyClass::Type2);
  CHECK(classify_frequency(0.050001, T, 0.75) == FrequencyClass::Type3);
  CHECK(classify_frequency(3.0, T, 0.75) == FrequencyClass::Type3);
  CHECK(to_string(FrequencyClass::Type2) == "type2");
}

TEST_CASE("triangle integral against Gauss-Kronrod") {
  const double T = 50;
  CHECK(triangle_cos_integral(0, T) == T / 2);
  for (double a : {1e-9, 1e-3, 0.1, 0.77, 3.0, 40.0}) {
    const long double want = oracle::gauss_kronrod(
        [&](long double t) { return std::cos(static_cast<long double>(a) * t) * (1 - t / T); }, 0, T, 1e-16L, 400);
    REQUIRE(triangle_cos_integral(a, T) == doctest::Approx(static_cast<double>(want)).epsilon(1e-11).scale(1e-12));
  }
  // Vanishes at aT = 2 pi k.
  for (int j = 1; j <= 5; ++j) {
    REQUIRE(std::fabs(triangle_cos_integral(2 * std::numbers::pi * j / T, T)) < 1e-13 * T);
  }
}

TEST_CASE("weighted integral against MPFR antiderivatives") {
  for (double alpha : {0.6, 0.75, 0.9}) {
    for (double T : {100.0, 1e4, 1e6}) {
      const WeightedKernel k = make_kernel(T, alpha);
      const double L = k.lower;
      CHECK(weighted_cos_integral(0, k) == doctest::Approx(T / 2 + L + L * L / (2 * T)).epsilon(1e-13));
      for (double a : {1e-12, 1 / T, 0.3 / L, 1.0 / (2 * L), 0.01, 1.0, 17.0}) {
        const double want = static_cast<double>(oracle::weighted_integral_mpfr(a, alpha, T));
        REQUIRE(weighted_cos_integral(a, k) == doctest::Approx(want).epsilon(1e-9).scale(1e-9 * T));
      }
    }
  }
  // Even in a.
  const WeightedKernel k = make_kernel(1000, 0.7);
  CHECK(weighted_cos_integral(-0.21, k) == weighted_cos_integral(0.21, k));
}

TEST_CASE("resonator evaluation") {
  const RepresentativeSet D = build_D(build_B(6), 1e6);
  REQUIRE(D.K() == 64);
  for (double t : {0.0, 1.5, 77.0, 12345.0}) {
    REQUIRE(std::abs(resonator_eval(D, t) - euler_product_eval(6, t)) < 1e-11);
  }
  CHECK(std::abs(resonator_eval(D, 0) - 64.0) < 1e-13);
  const auto g = resonator_grid(D, 3.0, 0.25, 9);
  for (std::size_t j = 0; j < g.size(); ++j) {
    REQUIRE(std::abs(g[j] - resonator_eval(D, 3.0 + 0.25 * j)) < 1e-12);
  }
}

TEST_CASE("square integral") {
  const RepresentativeSet D2 = build_D(build_B(1), 10);
  REQUIRE(D2.K() == 2);
  CHECK(resonator_square_integral(D2, 10) == doctest::Approx(21.742260356968007).epsilon(1e-14));
  SquareIntegralOptions q;
  q.with_quadrature = true;
  q.rtol = 1e-10;
  for (int M : {1, 3, 5}) {
    const double T = 100;
    const RepresentativeSet D = build_D(build_B(M), T);
    const SquareIntegralReport r = square_integral_report(D, T, q);
    REQUIRE(r.quadrature.has_value());
    REQUIRE(r.quadrature->value == doctest::Approx(r.closed_form).epsilon(1e-8));
    REQUIRE(r.closed_form <= r.triangle_bound);
    const double K = static_cast<double>(D.K());
    REQUIRE(r.l2_bound == doctest::Approx(11 * K * T * (1 + std::log(K))));
    REQUIRE(r.l2_bound_ratio == doctest::Approx(r.closed_form / r.l2_bound));
  }
  SquareIntegralOptions cap;
  cap.max_pairs = 10;
  CHECK_THROWS_AS(square_integral_report(build_D(build_B(6), 1e6), 1e6, cap), ResourceRefusal);
}

TEST_CASE("decomposition against the MPFR classification") {
  for (auto [M, T, alpha, limit] : {std::tuple{3, 50.0, 0.75, 12ull}, std::tuple{4, 300.0, 0.6, 9ull},
                                    std::tuple{2, 1000.0, 0.9, 20ull}}) {
    const RepresentativeSet D = build_D(build_B(M), T);
    std::vector<mpz_class> d;
    for (const auto& e : D.elements) d.push_back(e.exact());
    const oracle::ClassTotals o = oracle::classify_decomposition(d, limit, alpha, T);
    const ResonanceDecomposition r = frequency_decomposition(D, alpha, T, limit);
    double scale = 0;
    for (int c = 0; c < 3; ++c) scale += std::fabs(static_cast<double>(o.sum[c]));
    REQUIRE(r.count[0] == o.count[0]);
    REQUIRE(r.count[1] == o.count[1]);
    REQUIRE(r.count[2] == o.count[2]);
    REQUIRE(std::fabs(r.type1_sum - static_cast<double>(o.sum[0])) <= 1e-12 * scale);
    REQUIRE(std::fabs(r.type2_sum - static_cast<double>(o.sum[1])) <= 1e-12 * scale);
    REQUIRE(std::fabs(r.type3_sum - static_cast<double>(o.sum[2])) <= 1e-12 * scale);
    REQUIRE(r.total == doctest::Approx(r.type1_sum + r.type2_sum + r.type3_sum).epsilon(1e-14));
  }
  DecompositionOptions cap;
  cap.max_operations = 100;
  CHECK_THROWS_AS(frequency_decomposition(build_D(build_B(3), 50), 0.75, 50, 12, cap), ResourceRefusal);
}

TEST_CASE("decomposition equals the integral it decomposes") {
  const double T = 120;
  const double alpha = 0.75;
  const RepresentativeSet D = build_D(build_B(3), T);
  const ResonanceDecomposition r = frequency_decomposition(D, alpha, T, 120);
  ResonanceQuadratureOptions q;
  q.rtol = 1e-9;
  const ResonanceQuadrature quad_r = resonance_integral_quadrature(D, alpha, T, q);
  CHECK(quad_r.converged);
  CHECK(quad_r.value == doctest::Approx(r.total).epsilon(1e-7));
  CHECK(r.type2_sum >= 0);
}

TEST_CASE("resonant pairs") {
  const int M = 8;
  const double alpha = 0.75;
  const double T = std::pow(2.0, M / (2 * alpha - 1));
  const MultiplicativeSet B = build_B(M);
  const RepresentativeSet D = build_D(B, T);
  const ResonantPairReport r = resonant_pair_check(B, D, alpha, T, 1);
  CHECK(r.all_exact);
  CHECK(r.all_type1);
  CHECK(r.all_distinct);
  CHECK(r.entries.size() == D.K());
  std::uint64_t q = 0;
  for (const auto& e : r.entries) {
    q += e.quadruples;
    REQUIRE(e.exact_with_element == e.quadruples);
    REQUIRE(e.contribution > 0);
  }
  CHECK(q == r.quadruples);
}

TEST_CASE("type-3 tail") {
  const double T = 400;
  const double alpha = 0.7;
  const MultiplicativeSet B = build_B(3);
  const TailReport a = type3_tail_sum(B.elements[1], B.elements[5], alpha, T);
  const TailReport b = type3_tail_sum(B.elements[5], B.elements[1], alpha, T);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-13));
  CHECK(a.upper_part == doctest::Approx(b.lower_part).epsilon(1e-13));
  CHECK(a.value > 0);
  CHECK(a.normalized == doctest::Approx(a.value / (std::pow(T, 2 - 2 * alpha) * std::log(T))));
  CHECK_THROWS_AS(type3_tail_sum(B.elements[0], B.elements[1], alpha, 5000), ResourceRefusal);
}
