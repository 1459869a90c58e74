#include "doctest.h"

#include <bit>
#include <cmath>

#include "oracles.hpp"
#include "zetares/error.hpp"
#include "zetares/primes.hpp"
#include "zetares/resonator.hpp"
#include "zetares/serialize.hpp"

using namespace zr;

namespace {

mpz_class product_of_mask(std::uint64_t mask, const std::vector<std::uint64_t>& primes) {
  mpz_class v = 1;
  for (std::size_t r = 0; r < primes.size(); ++r) {
    if ((mask >> r) & 1U) v *= static_cast<unsigned long>(primes[r]);
  }
  return v;
}

// (1 + 1/T)^e as an exact rational; T must be an integer here.
mpq_class ratio_power(unsigned long T, unsigned long e) {
  mpz_class num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), T + 1, e);
  mpz_ui_pow_ui(den.get_mpz_t(), T, e);
  return mpq_class(num, den);
}

}  // namespace

TEST_CASE("exponent vectors") {
  const ExponentVector u = ExponentVector::parse("1100");
  CHECK(u.length() == 4);
  CHECK(u.mask() == 3);
  CHECK(u.weight() == 2);
  CHECK(u.to_string() == "1100");
  CHECK(exponent_product(u.mask()) == 6);
  CHECK_THROWS_AS(ExponentVector::parse("10a"), InvalidArgument);
  CHECK_THROWS_AS(ExponentVector(0, 0), InvalidArgument);
  CHECK_THROWS_AS(ExponentVector(65, 0), InvalidArgument);
  CHECK_THROWS_AS(ExponentVector(3, 8), InvalidArgument);

  CHECK(delta(u, u) == 0);
  CHECK(delta(u, ExponentVector::parse("1010")) == 2);
  CHECK(delta(ExponentVector::parse("1111"), ExponentVector::parse("0000")) == 4);
  CHECK(gcd_exponents(u, ExponentVector::parse("1010")).to_string() == "1000");
  CHECK(gcd_exponents(u, u) == u);
  CHECK(gcd_exponents(ExponentVector::parse("1111"), ExponentVector::parse("0000")).to_string() == "0000");
  CHECK_THROWS_AS(delta(u, ExponentVector::parse("110")), InvalidArgument);
  CHECK_THROWS_AS(gcd_exponents(u, ExponentVector::parse("110")), InvalidArgument);
}

TEST_CASE("delta is a metric on {0,1}^8") {
  const int M = 8;
  for (std::uint64_t a = 0; a < 256; ++a) {
    const ExponentVector u(M, a);
    for (std::uint64_t b = 0; b < 256; ++b) {
      const ExponentVector v(M, b);
      const int d = delta(u, v);
      REQUIRE((d == 0) == (a == b));
      REQUIRE(d == delta(v, u));
      for (std::uint64_t c = 0; c < 256; c += 7) {
        REQUIRE(d <= delta(u, ExponentVector(M, c)) + delta(ExponentVector(M, c), v));
      }
    }
  }
}

TEST_CASE("subset enumeration") {
  for (int M = 0; M <= 12; ++M) {
    for (int R = 0; R <= M; ++R) {
      std::uint64_t count = 0;
      std::uint64_t prev = 0;
      bool increasing = true;
      for_each_subset(M, R, [&](std::uint64_t x) {
        if (count > 0 && x <= prev) increasing = false;
        if (std::popcount(x) != R || (M < 64 && (x >> M) != 0)) increasing = false;
        prev = x;
        ++count;
      });
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(M), static_cast<unsigned long>(R));
      REQUIRE(count == binom.get_ui());
      REQUIRE(increasing);
    }
  }
}

TEST_CASE("build_B small cases") {
  const auto b1 = build_B(1);
  REQUIRE(b1.N() == 2);
  CHECK(b1.elements[0].exact_value == 1);
  CHECK(b1.elements[1].exact_value == 2);
  const auto b2 = build_B(2);
  std::vector<u128> v;
  for (const auto& e : b2.elements) v.push_back(e.exact_value);
  CHECK(v == std::vector<u128>{1, 2, 3, 6});
  const auto b4 = build_B(4);
  CHECK(b4.N() == 16);
  CHECK(b4.elements.back().exact_value == 210);
}

TEST_CASE("build_B structure for M <= 12") {
  for (int M = 1; M <= 12; ++M) {
    const auto B = build_B(M);
    const auto primes = oracle::first_primes(static_cast<std::size_t>(M));
    REQUIRE(B.primes == primes);
    REQUIRE(B.N() == (std::size_t{1} << M));
    for (std::size_t i = 0; i < B.N(); ++i) {
      const auto& b = B.elements[i];
      REQUIRE(b.has_exact);
      const mpz_class want = product_of_mask(b.exponents.mask(), primes);
      REQUIRE(b.exact() == want);
      REQUIRE(to_mpz(b.exact_value) == want);
      REQUIRE(B.index_of_mask[b.exponents.mask()] == i);
      const quad err = fabs_q(b.log_value - log_q(to_quad(b.exact_value)));
      REQUIRE(static_cast<double>(err) <= 1e-30 * std::max(1.0, static_cast<double>(b.log_value)));
      if (i > 0) REQUIRE(B.elements[i - 1].exact_value < b.exact_value);
    }
  }
}

TEST_CASE("build_B at the exact limit and beyond") {
  const mpz_class top = exponent_product_mpz((std::uint64_t{1} << 26) - 1);
  mpz_class want = 1;
  for (auto p : oracle::first_primes(26)) want *= static_cast<unsigned long>(p);
  CHECK(top == want);
  CHECK(mpz_sizeinbase(top.get_mpz_t(), 2) <= 128);
  CHECK_THROWS_AS(build_B(27), ResourceRefusal);
  BuildOptions small;
  small.max_elements = 1024;
  CHECK_THROWS_AS(build_B(11, small), ResourceRefusal);
  BuildOptions log_only;
  log_only.max_exact_M = 4;
  CHECK_THROWS_AS(build_B(6, log_only), ResourceRefusal);
  log_only.log_only = true;
  const auto B = build_B(6, log_only);
  CHECK(B.N() == 64);
  for (std::size_t i = 1; i < B.N(); ++i) REQUIRE(B.elements[i - 1].log_value < B.elements[i].log_value);
  CHECK(B.elements.back().exact() == exponent_product_mpz(63));
}

TEST_CASE("choose_M and choose_R") {
  CHECK(choose_M(1e6, 0.75) == 10);
  CHECK(choose_M(std::ldexp(1.0, 40), 0.75) == 20);
  CHECK(choose_M(1e4, 0.6) == 3);
  CHECK_THROWS_AS(choose_M(1e4, 0.5), InvalidArgument);
  CHECK_THROWS_AS(choose_M(1e4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(choose_M(8, 0.75), InvalidArgument);
  for (double a : {0.6, 0.75, 0.9}) {
    for (int M = 1; M <= 24; ++M) {
      if (std::exp2(M / (2 * a - 1)) < 16) continue;
      REQUIRE(choose_M(std::exp2(M / (2 * a - 1)), a) == M);
    }
  }
  const RChoice r16 = choose_R(16, 0.75);
  CHECK(r16.R == 0);
  CHECK(r16.clamped);
  CHECK(r16.effective_R == 1);
  const RChoice r = choose_R(100000, 0.6);
  CHECK(r.R == 7);
  CHECK_FALSE(r.clamped);
  CHECK(choose_R(3, 0.9).R == 0);
  CHECK(choose_R(3, 0.9).clamped);
  CHECK_THROWS_AS(choose_R(2, 0.75), DomainError);
}

TEST_CASE("bucket_index") {
  const auto one = make_resonator_integer(ExponentVector(3, 0));
  CHECK(bucket_index(one, 10) == 1);
  CHECK(bucket_index(one, 1e9) == 1);
  CHECK(bucket_index(make_resonator_integer(ExponentVector::parse("11")), 100) == 181);
  CHECK(bucket_index(make_resonator_integer(ExponentVector::parse("1")), 10) == 8);
  CHECK(bucket_index_certified(mpz_class(6), 100) == 181);
  CHECK(bucket_index_certified(mpz_class(2), 10) == 8);
}

TEST_CASE("bucket_index against exact rational powers") {
  const auto B = build_B(6);
  for (unsigned long T : {2ul, 3ul, 10ul, 100ul, 1000ul}) {
    for (const auto& b : B.elements) {
      const auto j = static_cast<unsigned long>(bucket_index(b, static_cast<double>(T)));
      REQUIRE(j >= 1);
      const mpq_class x(b.exact());
      REQUIRE(ratio_power(T, j - 1) <= x);
      REQUIRE(x < ratio_power(T, j));
      REQUIRE(bucket_index_certified(b.exact(), static_cast<double>(T)) == j);
    }
  }
}

TEST_CASE("build_D") {
  const auto B1 = build_B(1);
  const auto D1 = build_D(B1, 10);
  CHECK(D1.K() == 2);
  const auto B4 = build_B(4);
  CHECK(build_D(B4, 1e4).K() == 16);
  // T = 2 merges neighbours: only bucket minima survive.
  const auto D = build_D(B4, 2);
  CHECK(D.K() < 16);
  CHECK(D.multi_element_buckets > 0);
  for (std::size_t i = 0; i < B4.N(); ++i) {
    const auto k = D.representative_of[i];
    REQUIRE(D.element_bucket[i] == D.buckets[k]);
    REQUIRE(D.elements[k].exact_value <= B4.elements[i].exact_value);
    REQUIRE(D.find_representative(B4.elements[i]) == std::optional<std::size_t>(k));
  }
  for (std::size_t k = 1; k < D.K(); ++k) REQUIRE(D.buckets[k - 1] < D.buckets[k]);
  const auto again = build_D(B4, 2);
  CHECK(again.buckets == D.buckets);
  CHECK(again.source_index == D.source_index);
}

TEST_CASE("bucket windows hold exactly") {
  for (int M : {3, 6, 9}) {
    const auto B = build_B(M);
    for (double T : {2.0, 7.5, 50.0, 1e3}) {
      const auto D = build_D(B, T);
      const WindowReport w = verify_bucket_windows(B, D);
      REQUIRE(w.checked == B.N());
      REQUIRE(w.violations.empty());
      for (std::size_t i = 0; i < B.N(); ++i) {
        const mpq_class ratio(B.elements[i].exact(), D.elements[D.representative_of[i]].exact());
        REQUIRE(ratio >= 1);
        REQUIRE(ratio < 1 + 1 / mpq_class(T));
      }
    }
  }
}

TEST_CASE("representative ratios") {
  const auto B = build_B(6);
  const unsigned long T = 50;
  const auto D = build_D(B, static_cast<double>(T));
  const RatioReport r = verify_representative_ratios(D);
  CHECK(r.checked_pairs == D.K() * (D.K() - 1) / 2);
  for (std::size_t k = 0; k < D.K(); ++k) {
    for (std::size_t l = k + 1; l < D.K(); ++l) {
      const mpq_class ratio(D.elements[l].exact(), D.elements[k].exact());
      REQUIRE(ratio >= ratio_power(T, static_cast<unsigned long>(l - k - 1)));
    }
  }
  CHECK(static_cast<double>(r.min_log_margin) >= 0);
  CHECK_NOTHROW(verify_representative_ratios(build_D(build_B(4), 1e4)));
  RepresentativeSet single;
  single.M = 1;
  single.T = 10;
  single.elements = {make_resonator_integer(ExponentVector(1, 0))};
  single.buckets = {1};
  CHECK(verify_representative_ratios(single).checked_pairs == 0);
  // A hand-broken set must be caught.
  RepresentativeSet broken = build_D(build_B(3), 1e3);
  std::swap(broken.elements[1], broken.elements[5]);
  CHECK_THROWS_AS(verify_representative_ratios(broken), InvariantViolation);
}

TEST_CASE("pair separation") {
  const auto B4 = build_B(4);
  const auto rep = verify_pair_separation(B4, 1, 1e6);
  CHECK(rep.violations.empty());
  CHECK(rep.checked_pairs > 0);
  // (6, 10): reduced denominator 3 in 3/5 with b_k = 6 < b_l = 10.
  const double P = 4 * (std::log(4.0) + std::log(std::log(4.0)));
  CHECK(5 <= P * P);
  CHECK(static_cast<double>(rep.log_denominator_bound) == doctest::Approx(2 * std::log(P)).epsilon(1e-14));
  // Below the asymptotic regime the report is allowed to be non-empty.
  const auto small = verify_pair_separation(build_B(2), 1, 4);
  CHECK(small.checked_pairs == 6);
  for (const auto& v : small.violations) CHECK(v.k < v.l);
  SeparationOptions cap;
  cap.max_pairs = 10;
  CHECK_THROWS_AS(verify_pair_separation(B4, 1, 1e6, cap), ResourceRefusal);
  CHECK_THROWS_AS(verify_pair_separation(build_B(1), 1, 1e6), DomainError);
}

TEST_CASE("construction JSON round trip") {
  const auto B = build_B(5);
  const auto D = build_D(B, 30);
  const json doc = construction_to_json(B, &D, 0.75);
  const std::string text = doc.dump();
  const Construction c = construction_from_json(json::parse(text));
  REQUIRE(c.D.has_value());
  CHECK(c.alpha == std::optional<double>(0.75));
  CHECK(c.B.N() == B.N());
  CHECK(c.D->buckets == D.buckets);
  CHECK(construction_to_json(c.B, &*c.D, c.alpha).dump() == text);

  json tampered = json::parse(text);
  tampered["elements"][3]["exact_value"] = "7";
  CHECK_THROWS_AS(construction_from_json(tampered), InvalidArgument);
  json missing = json::parse(text);
  missing.erase("primes");
  CHECK_THROWS_AS(construction_from_json(missing), InvalidArgument);
  json bad_bucket = json::parse(text);
  bad_bucket["buckets"][0]["j"] = "2";
  CHECK_THROWS_AS(construction_from_json(bad_bucket), InvalidArgument);

  const json bonly = construction_to_json(B);
  CHECK_FALSE(bonly.contains("buckets"));
  CHECK_FALSE(construction_from_json(bonly).D.has_value());
}
