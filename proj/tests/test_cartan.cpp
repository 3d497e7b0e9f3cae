#include "spencer/cartan.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spencer;
using namespace spencer::lie;
using namespace spencer::cartan;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

LieVectorD ed(std::size_t n, std::size_t i) { return LieVectorD::basis(n, i); }

double max_diff(const DualVectorD& a, const DualVectorD& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Closed-form rotation for su2 with A.v = w e3: (cos ws, sin ws, 0) rotation of (l1, l2).
DualVectorD rotation(const DualVectorD& l0, double w, double s) {
  const double c = std::cos(w * s), sn = std::sin(w * s);
  return DualVectorD{c * l0[0] - sn * l0[1], sn * l0[0] + c * l0[1], l0[2]};
}

const std::vector<double> kV{1.0};
const std::vector<double> kX0{0.0};

double final_error(const LieAlgebra& g, Scheme scheme, double ds, double s_end) {
  const auto conn = ConnectionSampler::constant(ed(3, 2));
  const DualVectorD l0{1.0, 0.0, 0.0};
  const auto traj = integrate(g, {0.0, kX0, l0}, conn, kV, ds, s_end, scheme, false);
  return max_diff(traj.back().lambda, coadjoint_flow_exact(g, ed(3, 2), l0, s_end));
}

}  // namespace

TEST_CASE("cartan_rhs") {
  const auto su2 = load_preset("su2");
  CHECK(max_diff(cartan_rhs(su2, ed(3, 2), DualVectorD{1, 0, 0}), DualVectorD{0, 1, 0}) == 0.0);
  CHECK(max_diff(cartan_rhs(su2, ed(3, 2), DualVectorD{0, 1, 0}), DualVectorD{-1, 0, 0}) == 0.0);
  CHECK(max_diff(cartan_rhs(su2, ed(3, 2), DualVectorD(3)), DualVectorD(3)) == 0.0);
  const auto ab = LieAlgebra::abelian(3);
  CHECK(max_diff(cartan_rhs(ab, LieVectorD{1, 2, 3}, DualVectorD{4, 5, 6}), DualVectorD(3)) == 0.0);
}

TEST_CASE("cartan_rhs is the componentwise formula -C^c_{ba} (A.v)^b lambda_c") {
  const auto sl2 = load_preset("sl2");
  const LieVectorD a{0.3, -1.2, 0.7};
  const DualVectorD lam{1.5, -0.25, 2.0};
  const auto r = cartan_rhs(sl2, a, lam);
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) s -= to_double(sl2.constant(b, i, c)) * a[b] * lam[c];
    CHECK(r[i] == Approx(s).epsilon(1e-15));
  }
}

TEST_CASE("so3 form: d J / ds = omega x J") {
  const auto so3 = load_preset("so3");
  const LieVectorD w{0.4, -1.1, 0.9};
  const DualVectorD j{2.0, 0.5, -1.5};
  const auto r = cartan_rhs(so3, w, j);
  const DualVectorD wxj{w[1] * j[2] - w[2] * j[1], w[2] * j[0] - w[0] * j[2], w[0] * j[1] - w[1] * j[0]};
  for (std::size_t i = 0; i < 3; ++i) CHECK(r[i] == Approx(wxj[i]).epsilon(1e-15));
}

TEST_CASE("CFL bound") {
  const auto su2 = load_preset("su2");
  CHECK(cfl_bound(su2, ed(3, 2)) == 1.0);
  CHECK(cfl_bound(su2, LieVectorD{0, 0, 2}) == 0.5);
  CHECK(std::isinf(cfl_bound(LieAlgebra::abelian(2), LieVectorD{3, 4})));
  CHECK(std::isinf(cfl_bound(su2, LieVectorD(3))));
}

TEST_CASE("explicit Euler update and renormalization") {
  const auto su2 = load_preset("su2");
  const auto conn = ConnectionSampler::constant(ed(3, 2));
  const CharacteristicState s0{0.0, kX0, DualVectorD{1, 0, 0}};
  const auto s1 = step(su2, s0, conn, kV, 0.1, Scheme::euler_paper, false);
  CHECK(s1.lambda[0] == 1.0);
  CHECK(s1.lambda[1] == 0.1);
  CHECK(s1.lambda[2] == 0.0);
  CHECK(s1.s == 0.1);
  CHECK(s1.x[0] == 0.1);
  const auto s2 = step(su2, s0, conn, kV, 0.1, Scheme::euler_paper, true);
  CHECK(s2.lambda[0] == Approx(1.0 / std::sqrt(1.01)).epsilon(1e-15));
  CHECK(s2.lambda[1] == Approx(0.1 / std::sqrt(1.01)).epsilon(1e-15));
  CHECK(norm(s2.lambda) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("abelian steps never change lambda") {
  const auto ab = LieAlgebra::abelian(3);
  const auto conn = ConnectionSampler::abelian_zero(3);
  const CharacteristicState s0{0.0, kX0, DualVectorD{1, -2, 3}};
  for (auto scheme : {Scheme::euler_paper, Scheme::rk4}) {
    const auto traj = integrate(ab, s0, conn, kV, 0.37, 5.0, scheme, false);
    for (const auto& st : traj) CHECK(max_diff(st.lambda, s0.lambda) == 0.0);
  }
  // Any ds passes for a non-zero constant connection on an abelian algebra too.
  const auto c2 = ConnectionSampler::constant(LieVectorD{5, 5, 5});
  CHECK(max_diff(step(ab, s0, c2, kV, 100.0, Scheme::rk4, false).lambda, s0.lambda) == 0.0);
}

TEST_CASE("CFL gate rejects before mutating state") {
  const auto su2 = load_preset("su2");
  const auto conn = ConnectionSampler::constant(ed(3, 2));
  const CharacteristicState s0{0.0, kX0, DualVectorD{1, 0, 0}};
  CHECK_THROWS_AS(step(su2, s0, conn, kV, 1.0, Scheme::rk4, false), CflViolation);
  CHECK_THROWS_AS(step(su2, s0, conn, kV, 1.5, Scheme::euler_paper, false), CflViolation);
  try {
    step(su2, s0, conn, kV, 2.0, Scheme::rk4, false);
  } catch (const CflViolation& e) {
    CHECK(e.bound() == 1.0);
  }
  CHECK(s0.lambda[0] == 1.0);
  CHECK_NOTHROW(step(su2, s0, conn, kV, 0.999, Scheme::rk4, false));
}

TEST_CASE("rk4 quarter turn and full rotation") {
  const auto su2 = load_preset("su2");
  const auto conn = ConnectionSampler::constant(ed(3, 2));
  const DualVectorD l0{1, 0, 0};
  const auto q = integrate(su2, {0.0, kX0, l0}, conn, kV, 1e-3, kPi / 2, Scheme::rk4, false);
  CHECK(q.back().s == kPi / 2);
  CHECK(max_diff(q.back().lambda, DualVectorD{0, 1, 0}) <= 1e-10);

  const auto full = integrate(su2, {0.0, kX0, l0}, conn, kV, 1e-3, 2 * kPi, Scheme::rk4, false);
  double dev = 0.0, drift = 0.0;
  for (const auto& st : full) {
    dev = std::max(dev, max_diff(st.lambda, rotation(l0, 1.0, st.s)));
    drift = std::max(drift, std::abs(norm(st.lambda) - 1.0));
  }
  CHECK(dev <= 1e-8);
  CHECK(drift <= 1e-10);
}

TEST_CASE("coadjoint_flow_exact") {
  const auto su2 = load_preset("su2");
  const DualVectorD l0{1, 0, 0};
  CHECK(max_diff(coadjoint_flow_exact(su2, ed(3, 2), l0, 0.0), l0) == 0.0);
  CHECK(max_diff(coadjoint_flow_exact(su2, ed(3, 2), l0, kPi / 2), DualVectorD{0, 1, 0}) <= 1e-14);
  const DualVectorD l1{0.3, -0.8, 0.5};
  for (double s : {0.1, 1.0, 3.7, 25.0}) {
    const auto r = coadjoint_flow_exact(su2, LieVectorD{0, 0, 2}, l1, s);
    CHECK(max_diff(r, rotation(l1, 2.0, s)) <= 1e-12);
    CHECK(norm(r) == Approx(norm(l1)).epsilon(1e-13));
  }
  CHECK(max_diff(coadjoint_flow_exact(LieAlgebra::abelian(3), LieVectorD{1, 1, 1}, l1, 10.0), l1) == 0.0);
  // Generic direction: norm preserved for compact algebras.
  const auto r = coadjoint_flow_exact(su2, LieVectorD{0.3, -0.4, 1.2}, l1, 7.0);
  CHECK(std::abs(norm(r) - norm(l1)) <= 1e-13);
}

TEST_CASE("matrix exponential of a nilpotent matrix is a finite series") {
  Matrix<double> m(3, 3);
  m(0, 1) = 2.0;
  m(1, 2) = 3.0;
  const auto e = matrix_exponential(m);
  CHECK(e(0, 0) == 1.0);
  CHECK(e(0, 1) == Approx(2.0));
  CHECK(e(0, 2) == Approx(3.0));
  CHECK(e(1, 2) == Approx(3.0));
  CHECK(e(2, 0) == 0.0);
}

TEST_CASE("observed orders of accuracy") {
  const auto su2 = load_preset("su2");
  const double s_end = 2.0;
  const double e1 = final_error(su2, Scheme::euler_paper, 1e-3, s_end);
  const double e2 = final_error(su2, Scheme::euler_paper, 5e-4, s_end);
  const double p_euler = std::log2(e1 / e2);
  CHECK(p_euler >= 0.9);
  CHECK(p_euler <= 1.1);

  const double r1 = final_error(su2, Scheme::rk4, 0.1, s_end);
  const double r2 = final_error(su2, Scheme::rk4, 0.05, s_end);
  CHECK(std::log2(r1 / r2) >= 3.7);
}

TEST_CASE("euler_paper is linear in lambda") {
  const auto sl2 = load_preset("sl2");
  const auto conn = ConnectionSampler::constant(LieVectorD{0.2, 0.1, -0.3});
  const DualVectorD a{1.0, 2.0, -0.5}, b{-0.3, 0.7, 1.1};
  const auto sa = step(sl2, {0.0, kX0, a}, conn, kV, 0.05, Scheme::euler_paper, false);
  const auto sb = step(sl2, {0.0, kX0, b}, conn, kV, 0.05, Scheme::euler_paper, false);
  const auto sab = step(sl2, {0.0, kX0, a + b}, conn, kV, 0.05, Scheme::euler_paper, false);
  CHECK(max_diff(sab.lambda, sa.lambda + sb.lambda) <= 1e-12);
}

TEST_CASE("residual diagnostic") {
  const auto su2 = load_preset("su2");
  const auto conn = ConnectionSampler::constant(ed(3, 2));
  auto grid_for = [&](double h, auto f) {
    SampleGrid g;
    g.origin = {0.0};
    g.h = h;
    const auto n = static_cast<std::size_t>(std::lround(2.0 / h)) + 1;
    g.shape = {n};
    for (std::size_t i = 0; i < n; ++i) g.values.push_back(f(i * h));
    return g;
  };
  auto exact = [](double s) { return DualVectorD{std::cos(s), std::sin(s), 0.0}; };
  const double r1 = cartan_residual(su2, conn, grid_for(0.02, exact));
  const double r2 = cartan_residual(su2, conn, grid_for(0.01, exact));
  CHECK(r1 <= 1e-3);
  CHECK(r1 / r2 >= 3.6);
  CHECK(r1 / r2 <= 4.4);

  const double wrong = cartan_residual(su2, conn, grid_for(0.1, [](double) { return DualVectorD{1, 0, 0}; }));
  CHECK(wrong == Approx(1.0).epsilon(1e-14));

  const auto ab = LieAlgebra::abelian(3);
  const auto c0 = ConnectionSampler::abelian_zero(3);
  CHECK(cartan_residual(ab, c0, grid_for(0.1, [](double) { return DualVectorD{1, 2, 3}; })) == 0.0);

  SampleGrid tiny;
  tiny.origin = {0.0};
  tiny.shape = {2};
  tiny.h = 0.1;
  tiny.values = {DualVectorD(3), DualVectorD(3)};
  CHECK_THROWS(cartan_residual(su2, conn, tiny));
}

TEST_CASE("residual on a two-axis grid") {
  // lambda(x, y) = R_{x + 2y}(1, 0, 0) solves d_mu lambda = rhs(A_mu) with A_x = e3, A_y = 2 e3.
  const auto su2 = load_preset("su2");
  const ConnectionSampler conn(3, "affine", [](std::span<const double>, std::size_t mu) {
    return LieVectorD{0, 0, mu == 0 ? 1.0 : 2.0};
  });
  SampleGrid g;
  g.origin = {0.0, 0.0};
  g.h = 0.01;
  g.shape = {21, 21};
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j) {
      const double s = i * g.h + 2.0 * j * g.h;
      g.values.push_back(DualVectorD{std::cos(s), std::sin(s), 0.0});
    }
  CHECK(cartan_residual(su2, conn, g) <= 1e-3);
}

TEST_CASE("monopole radial check") {
  const auto z = monopole_radial_check(0.0, 1.0, 1e-3);
  CHECK(z.numeric == 0.0);
  CHECK(z.closed_form == 0.0);
  CHECK(z.difference == 0.0);
  CHECK(monopole_radial_check(1.0, 2.0, 1e-4).closed_form == -0.25);
  CHECK(monopole_radial_check(1.0, 1.0, 1e-4).difference <= 1e-7);
  CHECK_THROWS(monopole_radial_check(1.0, 1e-4, 1e-4));
}

TEST_CASE("Wu-Yang monopole connection") {
  const auto conn = ConnectionSampler::wu_yang_monopole(3, 2.0);
  const std::vector<double> x{1.0, kPi / 2, 0.3};
  CHECK(conn(x, 0).is_zero());
  CHECK(conn(x, 1).is_zero());
  CHECK(conn(x, 2)[2] == Approx(2.0));
  const std::vector<double> north{1.0, 0.0, 0.0};
  CHECK(conn(north, 2).is_zero());
}

TEST_CASE("nonholonomy coefficient") {
  const auto su2 = load_preset("su2");
  CHECK(nonholonomy_coefficient(su2, DualVectorD{1, 0, 0}, ed(3, 2)) == 0.0);
  CHECK(nonholonomy_coefficient(su2, DualVectorD{0, 0, 1}, ed(3, 2)) == 1.0);
  CHECK(nonholonomy_coefficient(su2, DualVectorD{0, 0, 2}, ed(3, 2)) == 0.5);
  CHECK_THROWS(nonholonomy_coefficient(su2, DualVectorD(3), ed(3, 2)));
}

TEST_CASE("schemes parse by name") {
  CHECK(parse_scheme("rk4") == Scheme::rk4);
  CHECK(parse_scheme("euler_paper") == Scheme::euler_paper);
  CHECK(scheme_name(Scheme::rk4) == "rk4");
  CHECK_THROWS_AS(parse_scheme("midpoint"), ConfigError);
}
