#include <doctest.h>

#include <cmath>

#include "ising/core.hpp"
#include "ising/rng.hpp"

using namespace ising;

TEST_CASE("xi matches the pinned examples") {
  CHECK(xi(0.7, ExtField(0.0)) == 0.0);
  CHECK(xi(1.0, ExtField::plus_inf()) == 1.0);
  // 0.5*log(cosh(0.8)/cosh(0.2)), evaluated independently.
  CHECK(xi(0.5, ExtField(0.3)) ==
        doctest::Approx(0.13544274424419311).epsilon(1e-13));
}

TEST_CASE("xi is odd, bounded, and consistent with the atanh form") {
  CounterRng rng(7);
  for (int i = 0; i < 2000; ++i) {
    double beta = 5.0 * rng.next_double();
    double h = 5.0 * rng.next_double();
    double v = xi(beta, ExtField(h));
    CHECK(xi(beta, ExtField(-h)) == -v);  // exact sign symmetry
    CHECK(v >= 0.0);
    CHECK(v <= std::min(beta, h));
    double naive = std::atanh(std::tanh(beta) * std::tanh(h));
    CHECK(std::fabs(v - naive) <= 1e-12);
  }
}

TEST_CASE("xi is strictly increasing in both arguments on a moderate grid") {
  double prev = -1.0;
  for (double h = 0.05; h < 6.0; h += 0.05) {
    double v = xi(0.9, ExtField(h));
    CHECK(v > prev);
    prev = v;
  }
  prev = -1.0;
  for (double beta = 0.05; beta < 6.0; beta += 0.05) {
    double v = xi(beta, ExtField(0.9));
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("xi saturates continuously toward the plus boundary") {
  double beta = 1.3;
  double prev = xi(beta, ExtField(10.0));
  for (double h : {20.0, 40.0, 80.0, 400.0, 1e6}) {
    double v = xi(beta, ExtField(h));
    CHECK(v >= prev);
    CHECK(v <= beta);
    prev = v;
  }
  CHECK(xi(beta, ExtField::plus_inf()) == beta);
}

TEST_CASE("xi rejects bad beta") {
  CHECK_THROWS_AS(xi(-0.1, ExtField(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(xi(kInf, ExtField(1.0)), std::invalid_argument);
}

TEST_CASE("critical_beta") {
  CHECK(critical_beta(2.0).value == doctest::Approx(0.5493061443340548).epsilon(1e-14));
  CHECK(critical_beta(2.0).has_transition);
  CHECK(critical_beta(10.0).value == doctest::Approx(0.10033534773107558).epsilon(1e-14));
  CHECK_FALSE(critical_beta(1.0).has_transition);
  CHECK(critical_beta(1.0).value == kInf);
  CHECK_FALSE(critical_beta(0.5).has_transition);
  CHECK_THROWS_AS(critical_beta(0.0), std::invalid_argument);
}

TEST_CASE("atanh_clamped") {
  CHECK(atanh_clamped(0.0).value() == 0.0);
  CHECK(atanh_clamped(1.0).is_plus_inf());
  CHECK(atanh_clamped(std::tanh(2.5)).value() == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(atanh_clamped(1.0 + 5e-13).is_plus_inf());  // clamped round-off
  CHECK_THROWS_AS(atanh_clamped(1.0 + 1e-11), std::domain_error);
  CHECK_THROWS_AS(atanh_clamped(-1.5), std::domain_error);
  CHECK(atanh_clamped(-1.0).value() == -kInf);
}

TEST_CASE("IsingParams validation") {
  CHECK_THROWS_AS(IsingParams(-0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(IsingParams(0.5, kInf), std::invalid_argument);
  IsingParams p(0.5, 0.1, {ExtField(0.2), ExtField::plus_inf()});
  CHECK(p.field_at(1).is_plus_inf());
  CHECK(p.field_at(0).value() == 0.2);
  CHECK_THROWS_AS(IsingParams(0.5, 0.1, {ExtField(-kInf)}), std::invalid_argument);
  // negative B is a valid model, only beta is sign-restricted
  CHECK(IsingParams(0.5, -0.3).field() == -0.3);
}

TEST_CASE("counter rng is stream and position stable") {
  CounterRng a(42, 1), b(42, 1), c(42, 2);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  bool any_diff = false;
  CounterRng a2(42, 1);
  for (int i = 0; i < 100; ++i) any_diff |= (a2.next_u64() != c.next_u64());
  CHECK(any_diff);
  CounterRng d(42, 1);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) mean += d.next_double();
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}
