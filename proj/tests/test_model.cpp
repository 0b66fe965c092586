#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "resonance/errors.hpp"
#include "resonance/model.hpp"
#include "resonance/rational.hpp"

using namespace resonance;

namespace {

DeltaSystem system_of(double h, std::initializer_list<std::array<double, 3>> deltas) {
  DeltaSystem s;
  s.h = h;
  for (const auto& d : deltas) s.deltas.push_back(DeltaBarrier::make(d[0], d[1], d[2]));
  return s;
}

bool has(const std::vector<Violation>& v, ViolationKind kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("validate accepts the three-delta example") {
  CHECK(validate(system_of(0.1, {{0, 0.5, 1}, {4, 0.5, 1}, {6, 2.0, 1}})).empty());
}

TEST_CASE("validate reports each broken invariant") {
  const auto dup = validate(system_of(0.1, {{0, 0.5, 1}, {0, 0.5, 1}}));
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].kind == ViolationKind::positions_not_increasing);
  CHECK(dup[0].index == 1);
  CHECK(std::string(to_string(dup[0].kind)) == "positions-not-increasing");

  const auto neg = validate(system_of(0.1, {{0, -1.0, 1}}));
  REQUIRE(neg.size() == 1);
  CHECK(neg[0].kind == ViolationKind::beta_nonpositive);

  CHECK(has(validate(system_of(-0.1, {{0, 1, 1}})), ViolationKind::h_nonpositive));
  CHECK(has(validate(system_of(0.1, {{0, 1, 0}})), ViolationKind::coupling_zero));
  CHECK(has(validate(DeltaSystem{0.1, {}}), ViolationKind::no_deltas));

  const auto several = validate(system_of(0.0, {{1, 0, 0}, {0, 1, 1}}));
  CHECK(has(several, ViolationKind::h_nonpositive));
  CHECK(has(several, ViolationKind::beta_nonpositive));
  CHECK(has(several, ViolationKind::coupling_zero));
  CHECK(has(several, ViolationKind::positions_not_increasing));
}

TEST_CASE("validate is total on non-finite input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(has(validate(system_of(nan, {{0, 1, 1}})), ViolationKind::non_finite));
  CHECK(has(validate(system_of(0.1, {{nan, 1, 1}, {inf, 1, 1}, {2, -inf, nan}})), ViolationKind::non_finite));
  CHECK(has(validate(Window{nan, 1, -1, 0}), ViolationKind::non_finite));
}

TEST_CASE("window validation") {
  CHECK(validate(Window{}).empty());
  CHECK(has(validate(Window{1, 0.5, -1, 0}), ViolationKind::window_empty));
  CHECK(has(validate(Window{0, 1, -1, 0}), ViolationKind::window_re_nonpositive));
  const Window w{0.1, 2.0, -0.3, 0.0};
  CHECK(w.contains({1.0, -0.1}));
  CHECK_FALSE(w.contains({1.0, 0.01}));
  CHECK(w.edge_distance({1.0, -0.1}) == doctest::Approx(0.1));
  const Window d = w.dilated(0.1);
  CHECK(d.re_min == doctest::Approx(0.1 - 0.19));
  CHECK(d.im_max == doctest::Approx(0.03));
}

TEST_CASE("omega_pow") {
  const auto s = system_of(0.1, {{0, 1, 1}});
  SUBCASE("zero exponent") {
    const auto w = omega_pow(s, {0.0, 0.0}, 3.7);
    REQUIRE(w);
    CHECK(w->real() == 1.0);
    CHECK(w->imag() == 0.0);
  }
  SUBCASE("half period") {
    const double lambda = 2.5;
    const auto w = omega_pow(s, {std::numbers::pi * s.h / lambda, 0.0}, lambda);
    REQUIRE(w);
    CHECK(w->real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(w->imag()) < 1e-15);
  }
  SUBCASE("z = 1 - 0.1i, h = 0.1, lambda = 2 gives e^2 e^(20i)") {
    const auto w = omega_pow(s, {1.0, -0.1}, 2.0);
    REQUIRE(w);
    const long double mag = std::exp(2.0L);
    const long double re = mag * std::cos(20.0L);
    const long double im = mag * std::sin(20.0L);
    CHECK(w->real() == doctest::Approx(static_cast<double>(re)).epsilon(1e-14));
    CHECK(w->imag() == doctest::Approx(static_cast<double>(im)).epsilon(1e-14));
  }
  SUBCASE("overflow guard") {
    CHECK_FALSE(omega_pow(s, {1.0, -10.0}, 8.0));  // exponent 800
    CHECK(omega_pow(s, {1.0, -10.0}, 6.0));        // exponent 600
  }
  SUBCASE("modulus property") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const Complex z(2 * std::abs(u(rng)), u(rng));
      const double lambda = 5 * u(rng);
      if (std::abs(lambda * z.imag() / s.h) > 100) continue;
      const auto w = omega_pow(s, z, lambda);
      REQUIRE(w);
      const double expected = std::exp(-lambda * z.imag() / s.h);
      CHECK(std::abs(std::abs(*w) - expected) <= 1e-12 * expected);
    }
  }
}

TEST_CASE("reflection and transmission") {
  SUBCASE("transparent barrier when h^beta underflows") {
    const auto s = system_of(0.1, {{0, 400.0, 1}});
    CHECK(std::abs(reflection_r(s, 0, {1.0, -0.1})) < 1e-300);
    CHECK(transmission_t(s, 0, {1.0, -0.1}) == Complex(1.0, 0.0));
  }
  SUBCASE("z = i C h^beta gives R = -1/3, T = 2/3") {
    const auto s = system_of(0.1, {{0, 1.5, 2.0}});
    const Complex z(0.0, s.coupling(0));
    const Complex r = reflection_r(s, 0, z);
    const Complex t = transmission_t(s, 0, z);
    CHECK(r.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(t.real() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(r.imag()) < 1e-16);
    CHECK(std::abs(t.imag()) < 1e-16);
  }
  SUBCASE("pole") {
    const auto s = system_of(0.1, {{0, 1.0, 1.0}});
    const Complex pole(0.0, -s.coupling(0) / 2.0);
    CHECK_THROWS_AS(reflection_r(s, 0, pole), PoleError);
    CHECK_THROWS_AS(transmission_t(s, 0, pole), PoleError);
  }
  SUBCASE("T - R = 1 on random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto s = system_of(0.1, {{0, 0.5, 3.0}, {1, 2.0, -0.7}, {3, 1.0, 1.2}});
    for (int i = 0; i < 100; ++i) {
      const Complex z(2 * u(rng), u(rng));
      const std::size_t j = static_cast<std::size_t>(i % 3);
      const Complex diff = transmission_t(s, j, z) - reflection_r(s, j, z);
      CHECK(std::abs(diff - Complex(1.0, 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("sorting by position") {
  bool reordered = false;
  const auto s = sorted_by_position(system_of(0.1, {{3, 1, 1}, {0, 2, 1}}), &reordered);
  CHECK(reordered);
  CHECK(s.deltas[0].x == 0.0);
  CHECK(s.deltas[0].beta == 2.0);
  sorted_by_position(s, &reordered);
  CHECK_FALSE(reordered);
}

TEST_CASE("exact rationals") {
  CHECK(parse_rational("7/12") == Rational(7, 12));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
  CHECK(parse_rational("2") == Rational(2));
  CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK(rational_from_double(0.1) == Rational(1, 10));
  CHECK(rational_from_double(1e-5) == Rational(1, 100000));
  CHECK(to_fraction_string(Rational(3, 8)) == "3/8");
  CHECK(to_fraction_string(Rational(-2)) == "-2");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(DeltaBarrier::make(0.5, 0.05, 1).beta_exact == Rational(1, 20));
}
