#include "savnls/splitting.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace savnls;
using std::numbers::pi;

namespace {

ComplexField random_field(const Grid1D& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto u01 = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
  ComplexField f(g);
  for (int a = 0; a < g.size(); ++a) f[a] = cplx{2.0 * u01() - 1.0, 2.0 * u01() - 1.0};
  return f;
}

// exact solution of i u_t = -u_xx - |u|^2 u
ComplexField solitary(const Grid1D& g, double t) {
  return sample_complex(g, [t](double x) {
    return std::sqrt(2.0) * std::polar(1.0, t) / std::cosh(x);
  });
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double l2_mod_error(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i]) - std::abs(b[i]);
    s += d * d;
  }
  return std::sqrt(a.grid.spacing() * s);
}

}  // namespace

TEST(LinearFlow, ZeroTimeIsIdentity) {
  Grid1D g(64, pi);
  ComplexField u = random_field(g, 1);
  EXPECT_EQ(max_abs_diff(linear_flow(u, 0.0), u), 0.0);
}

TEST(LinearFlow, EigenmodePhase) {
  Grid1D g(64, pi);
  const double dt = 0.37;
  ComplexField u = sample_complex(g, [](double x) { return std::polar(1.0, x); });
  ComplexField v = linear_flow(u, dt);
  const cplx factor = std::polar(1.0, -dt);
  for (int a = 0; a < g.size(); ++a)
    EXPECT_NEAR(std::abs(v[a] - factor * u[a]), 0.0, 1e-13);
}

TEST(LinearFlow, MassInvariant) {
  Grid1D g(128, 2.0);
  ComplexField u = random_field(g, 2);
  EXPECT_NEAR(mass(linear_flow(u, 0.83)), mass(u), 1e-13 * mass(u));
}

TEST(NonlinearFlow, ZeroTimeIsIdentity) {
  Grid1D g(64, pi);
  NlsProblem prob(g, harmonic_potential(g), Nonlinearity::cubic(2.0), 1.0);
  ComplexField u = random_field(g, 3);
  EXPECT_EQ(max_abs_diff(nonlinear_flow(u, 0.0, prob), u), 0.0);
}

TEST(NonlinearFlow, ModulusPreservedPointwise) {
  Grid1D g(64, pi);
  NlsProblem prob(g, harmonic_potential(g), Nonlinearity::power(1.0, 8.0), 1.0);
  ComplexField u = random_field(g, 4);
  ComplexField v = nonlinear_flow(u, 0.9, prob);
  for (int a = 0; a < g.size(); ++a)
    EXPECT_NEAR(std::abs(v[a]), std::abs(u[a]), 1e-14);
}

TEST(NonlinearFlow, ConstantFieldClosedFormPhase) {
  Grid1D g(32, pi);
  const double v0 = 0.4, beta = -1.3, amp = 1.2, dt = 0.21;
  RealField pot = sample_real(g, [v0](double) { return v0; });
  NlsProblem prob(g, pot, Nonlinearity::cubic(beta), 10.0);
  ComplexField u = sample_complex(g, [amp](double) { return cplx{amp, 0.0}; });
  ComplexField w = nonlinear_flow(u, dt, prob);
  const cplx expected = amp * std::polar(1.0, -(v0 + beta * amp * amp) * dt);
  for (int a = 0; a < g.size(); ++a)
    EXPECT_NEAR(std::abs(w[a] - expected), 0.0, 1e-14);
}

TEST(SplitStep, FreeCaseReducesToLinearFlow) {
  Grid1D g(64, pi);
  auto prob = free_problem(g);
  ComplexField u = random_field(g, 5);
  const double tau = 0.13;
  ComplexField exact = linear_flow(u, tau);
  EXPECT_LT(max_abs_diff(split_step(u, SplitScheme(SplitOrder::lie, tau), prob), exact), 1e-13);
  EXPECT_LT(max_abs_diff(split_step(u, SplitScheme(SplitOrder::strang, tau), prob), exact), 1e-13);
}

TEST(SplitStep, MassExactlyConservedLongRun) {
  Grid1D g(64, pi);
  NlsProblem prob(g, harmonic_potential(g), Nonlinearity::cubic(-1.0), 1.0);
  for (SplitOrder order : {SplitOrder::lie, SplitOrder::strang}) {
    ComplexField u = random_field(g, 6);
    const double m0 = mass(u);
    SplitScheme scheme(order, 1e-3);
    for (int k = 0; k < 10000; ++k) u = split_step(u, scheme, prob);
    EXPECT_NEAR(mass(u), m0, 1e-12 * m0);
  }
}

TEST(SplitStep, StrangIsSymmetric) {
  Grid1D g(128, 16.0);
  NlsProblem prob(g, harmonic_potential(g), Nonlinearity::cubic(-1.0), 1.0);
  ComplexField u = solitary(g, 0.0);
  const double tau = 0.05;
  ComplexField fwd = split_step_signed(u, SplitOrder::strang, tau, prob);
  ComplexField back = split_step_signed(fwd, SplitOrder::strang, -tau, prob);
  EXPECT_LT(max_abs_diff(back, u), 1e-10);
}

TEST(SplitStep, OrdersOnSmoothSolitaryWave) {
  // Lie slope 1.0 +- 0.2, Strang slope 2.0 +- 0.2 against the exact solution
  Grid1D g(256, 16.0);
  NlsProblem prob(g, RealField(g), Nonlinearity::cubic(-1.0), 1.0);
  const double t_end = 1.0;
  auto err_at = [&](SplitOrder order, double tau) {
    ComplexField u = solitary(g, 0.0);
    const long steps = std::lround(t_end / tau);
    SplitScheme scheme(order, tau);
    for (long k = 0; k < steps; ++k) u = split_step(u, scheme, prob);
    return l2_mod_error(u, solitary(g, t_end));
  };
  for (auto [order, expected] :
       {std::pair{SplitOrder::lie, 1.0}, std::pair{SplitOrder::strang, 2.0}}) {
    std::vector<double> errs;
    for (double tau : {0.02, 0.01, 0.005, 0.0025}) errs.push_back(err_at(order, tau));
    double slope = 0.0;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) slope += std::log2(errs[i] / errs[i + 1]);
    slope /= static_cast<double>(errs.size() - 1);
    EXPECT_NEAR(slope, expected, 0.2);
  }
}
