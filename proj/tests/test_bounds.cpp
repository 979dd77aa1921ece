#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pleig/bounds.hpp"
#include "pleig/errors.hpp"

using namespace pleig;

namespace {

WeightProfile weight(double p, int N, double R, double Rbar) {
  return make_weight({PExponent(p), N, R, Rbar});
}

std::vector<WeightProfile> matrix_profiles() {
  std::vector<WeightProfile> out;
  for (double p : {1.5, 2.0, 3.0}) {
    for (int N : {2, 3, 5}) {
      if (p > N) continue;
      for (double R : {1.0, 10.0, 100.0}) out.push_back(weight(p, N, R, R + 1.0));
    }
  }
  // A few that are not of the R, R+1 form, including both kink-free shapes.
  out.push_back(weight(2.0, 2, 1.0, std::exp(2.0)));
  out.push_back(weight(2.0, 2, 0.1, 0.2));
  out.push_back(weight(2.5, 4, 0.3, 2.0));
  out.push_back(weight(1.2, 3, 5.0, 7.0));
  return out;
}

}  // namespace

TEST_CASE("p = r+1, N = 2r+1 at R = 10 against 30-digit reference values") {
  // t* = 11 - sqrt(110); reference integrals computed independently in
  // arbitrary precision and frozen here.
  struct Ref {
    int r;
    double q_minus;
    double q_plus;
  };
  const Ref refs[] = {{1, 0.95381494529899032352, 1.0492153577313127068},
                      {2, 0.93281361605834748952, 1.0762938219581814361},
                      {3, 0.91307997779947802121, 1.1051845923411251772}};
  for (const Ref& ref : refs) {
    CAPTURE(ref.r);
    const WeightProfile w = weight(ref.r + 1.0, 2 * ref.r + 1, 10.0, 11.0);
    REQUIRE(w.kink());
    CHECK(*w.kink() == doctest::Approx(11.0 - std::sqrt(110.0)).epsilon(1e-14));
    CHECK(q_bar_minus(w) == doctest::Approx(ref.q_minus).epsilon(1e-14));
    CHECK(q_bar_plus(w) == doctest::Approx(ref.q_plus).epsilon(1e-14));
    CHECK(q_bar_minus_quadrature(w) == doctest::Approx(ref.q_minus).epsilon(1e-12));
    CHECK(q_bar_plus_quadrature(w) == doctest::Approx(ref.q_plus).epsilon(1e-12));
  }
}

TEST_CASE("closed form against quadrature, identity and ordering") {
  for (const WeightProfile& w : matrix_profiles()) {
    const double qm = q_bar_minus(w);
    const double qp = q_bar_plus(w);
    const double Q1 = q_antiderivative(w, 1.0);
    CHECK(std::abs(qm - q_bar_minus_quadrature(w)) <= 1e-10);
    CHECK(std::abs(qp - q_bar_plus_quadrature(w, 1e-12 * qp)) <= 1e-10 * qp);
    CHECK(std::abs(qm + qp - 1.0 - Q1) <= 1e-12 * std::max(1.0, Q1));
    // The identity again with the integral of q taken by quadrature.
    const double quad = weight_integral_quadrature(w, 0.0, 1.0, 5e-13 * std::max(1.0, Q1));
    CHECK(std::abs(qm + qp - 1.0 - quad) <= 1e-12 * std::max(1.0, quad));
    CHECK(qm > 0.0);
    CHECK(qm <= 1.0);
    CHECK(qm <= Q1);
    CHECK(qp >= 1.0);
    CHECK(qp >= Q1);
  }
}

TEST_CASE("kink-free shapes") {
  const WeightProfile above = weight(2.0, 2, 1.0, std::exp(2.0));
  CHECK(q_bar_minus(above) == 1.0);
  CHECK(q_bar_plus(above) == doctest::Approx(q_antiderivative(above, 1.0)).epsilon(1e-15));
  const WeightProfile below = weight(2.0, 2, 0.1, 0.2);
  CHECK(q_bar_plus(below) == 1.0);
  CHECK(q_bar_minus(below) == doctest::Approx(q_antiderivative(below, 1.0)).epsilon(1e-15));
}

TEST_CASE("bracket") {
  SUBCASE("unit weight collapses to (k pi_p)^p") {
    for (double p : {1.5, 2.0, 3.0}) {
      const PTrigTable table{PExponent(p)};
      const WeightProfile unit = make_unit_weight_for_testing(PExponent(p));
      CHECK(q_bar_minus(unit) == 1.0);
      CHECK(q_bar_plus(unit) == 1.0);
      for (int k = 1; k <= 4; ++k) {
        const ZhangBracket b = zhang_bracket(unit, k, table);
        const double target = std::pow(k * table.pi_p(), p);
        CHECK(b.lower == doctest::Approx(target).epsilon(1e-15));
        CHECK(b.upper == doctest::Approx(target).epsilon(1e-15));
        CHECK(b.width() == 0.0);
      }
    }
  }
  SUBCASE("p=2, N=3, R=1, Rbar=2 contains pi^2") {
    const PTrigTable table{PExponent(2.0)};
    const ZhangBracket b = zhang_bracket(weight(2.0, 3, 1.0, 2.0), 1, table);
    CHECK(b.contains(std::numbers::pi * std::numbers::pi));
    CHECK(b.lower < b.upper);
    CHECK(b.q_minus <= 1.0);
    CHECK(b.q_plus >= 1.0);
  }
  SUBCASE("doubling k scales both ends by 2^p") {
    for (double p : {1.5, 2.0, 3.0}) {
      const PTrigTable table{PExponent(p)};
      const WeightProfile w = weight(p, 3, 1.0, 2.0);
      for (int k = 1; k <= 3; ++k) {
        const ZhangBracket a = zhang_bracket(w, k, table);
        const ZhangBracket b = zhang_bracket(w, 2 * k, table);
        CHECK(b.lower / a.lower == doctest::Approx(std::pow(2.0, p)).epsilon(1e-14));
        CHECK(b.upper / a.upper == doctest::Approx(std::pow(2.0, p)).epsilon(1e-14));
      }
    }
  }
  SUBCASE("errors") {
    const PTrigTable table{PExponent(2.0)};
    const WeightProfile w = weight(2.0, 3, 1.0, 2.0);
    CHECK_THROWS_AS(zhang_bracket(w, 0, table), DomainError);
    CHECK_THROWS_AS(zhang_bracket(w, -1, table), DomainError);
    CHECK_THROWS_AS(zhang_bracket(w, 1, PTrigTable{PExponent(3.0)}), DomainError);
  }
}

TEST_CASE("bracket collapses along R = 10^j for every family") {
  struct Fam {
    double p;
    int N;
  };
  for (const Fam f : {Fam{2, 2}, Fam{3, 3}, Fam{2, 3}, Fam{2, 5}, Fam{2, 10}, Fam{3, 5}, Fam{4, 7}}) {
    CAPTURE(f.p);
    CAPTURE(f.N);
    double prev_gap = INFINITY;
    for (int j = 1; j <= 4; ++j) {
      const double R = std::pow(10.0, j);
      const WeightProfile w = weight(f.p, f.N, R, R + 1.0);
      const double gap = q_bar_plus(w) - q_bar_minus(w);
      CHECK(gap > 0.0);
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
  }
}
