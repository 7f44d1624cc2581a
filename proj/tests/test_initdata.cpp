#include "savnls/initdata.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "savnls/model.hpp"

using namespace savnls;
using std::numbers::pi;

namespace {

// residual of i u_t - (c_lap * (-Lap u) + beta |u|^2 u), with u_t supplied
// analytically and the Laplacian evaluated spectrally
double pde_residual(const ComplexField& u, const ComplexField& ut, double c_lap, double beta) {
  ComplexField lap = laplacian(u);
  double worst = 0.0;
  for (int a = 0; a < u.size(); ++a) {
    const cplx rhs = c_lap * (-lap[a]) + beta * std::norm(u[a]) * u[a];
    worst = std::max(worst, std::abs(cplx{0.0, 1.0} * ut[a] - rhs));
  }
  return worst;
}

}  // namespace

TEST(BrightSoliton, RestingCaseIsSech) {
  Grid1D g(512, 32.0);
  ComplexField u = bright_soliton(1.0, -1.0, 0.0, 0.0, g);
  for (int a = 0; a < g.size(); ++a) {
    EXPECT_NEAR(u[a].real(), 1.0 / std::cosh(g.node(a)), 1e-15);
    EXPECT_EQ(u[a].imag(), 0.0);
  }
}

TEST(BrightSoliton, MassAnalytic) {
  // int a^2/(-beta) sech^2(a x) dx = 2a/(-beta)
  Grid1D g(2048, 32.0);
  EXPECT_NEAR(mass(bright_soliton(1.0, -1.0, 1.0, 0.0, g)), 2.0, 1e-10);
  EXPECT_NEAR(mass(bright_soliton(2.0, -0.5, 0.5, 0.0, g)), 8.0, 1e-10);
}

TEST(BrightSoliton, ModulusTranslates) {
  Grid1D g(512, 32.0);
  const double a = 1.0, beta = -1.0, v = 1.0, t = 2.5;
  ComplexField ut = bright_soliton(a, beta, v, t, g);
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const double expected = (a / std::sqrt(-beta)) / std::cosh(a * (x - v * t));
    EXPECT_NEAR(std::abs(ut[j]), expected, 1e-14);
  }
}

TEST(BrightSoliton, PositiveBetaIsError) {
  Grid1D g(64, 32.0);
  EXPECT_THROW(bright_soliton(1.0, 0.5, 1.0, 0.0, g), std::invalid_argument);
  EXPECT_THROW(bright_soliton(1.0, 0.0, 1.0, 0.0, g), std::invalid_argument);
}

TEST(BrightSoliton, ResidualPinsHalfLaplacianConvention) {
  // the printed closed form solves i u_t = -(1/2) u_xx + beta |u|^2 u;
  // the domain/resolution pair keeps both the periodic tail and the
  // spectral truncation of sech below the tolerance
  Grid1D g(512, 34.0);
  const double a = 1.0, beta = -1.0, v = 1.0, t = 0.3;
  ComplexField u = bright_soliton(a, beta, v, t, g);
  ComplexField ut(g);
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const double w = a * (x - v * t);
    ut[j] = (cplx{a * v * std::tanh(w), -0.5 * (v * v - a * a)}) * u[j];
  }
  EXPECT_LT(pde_residual(u, ut, 0.5, beta), 1e-10);
  // and does NOT solve the full-Laplacian equation
  EXPECT_GT(pde_residual(u, ut, 1.0, beta), 1e-3);
}

TEST(SolitaryWave, RestingFormAndStationaryModulus) {
  Grid1D g(256, pi / 0.11);
  ComplexField u0 = solitary_wave(0.0, g);
  for (int a = 0; a < g.size(); ++a) {
    EXPECT_NEAR(u0[a].real(), std::sqrt(2.0) / std::cosh(g.node(a)), 1e-15);
    EXPECT_EQ(u0[a].imag(), 0.0);
  }
  ComplexField u1 = solitary_wave(17.0, g);
  for (int a = 0; a < g.size(); ++a) EXPECT_NEAR(std::abs(u1[a]), std::abs(u0[a]), 1e-14);
}

TEST(SolitaryWave, ExactForFullLaplacianEquation) {
  // residual of i u_t + Lap u + |u|^2 u at spectral accuracy
  Grid1D g(512, 34.0);
  const double t = 0.7;
  ComplexField u = solitary_wave(t, g);
  ComplexField ut(g);
  for (int a = 0; a < g.size(); ++a) ut[a] = cplx{0.0, 1.0} * u[a];
  EXPECT_LT(pde_residual(u, ut, 1.0, -1.0), 1e-10);
}

TEST(PlaneWave, ZeroAmplitudeAndMass) {
  Grid1D g(64, pi);
  EXPECT_EQ(linf_norm(plane_wave(0.0, 3, g)), 0.0);
  const double amp = 0.8;
  EXPECT_NEAR(mass(plane_wave(amp, 5, g)), 2.0 * pi * amp * amp, 1e-12);
}

TEST(HAlpha, DeterministicForFixedArguments) {
  Grid1D g(256, pi);
  ComplexField a = h_alpha_random(2.0, 42, g);
  ComplexField b = h_alpha_random(2.0, 42, g);
  for (int j = 0; j < g.size(); ++j) {
    EXPECT_EQ(a[j].real(), b[j].real());
    EXPECT_EQ(a[j].imag(), b[j].imag());
  }
  ComplexField c = h_alpha_random(2.0, 43, g);
  double diff = 0.0;
  for (int j = 0; j < g.size(); ++j) diff = std::max(diff, std::abs(a[j] - c[j]));
  EXPECT_GT(diff, 1e-3);
}

TEST(HAlpha, UnitNorm) {
  Grid1D g(1024, pi);
  for (double alpha : {2.0 / 3.0, 2.0, 5.0})
    EXPECT_NEAR(l2_norm(h_alpha_random(alpha, 7, g)), 1.0, 1e-12);
}

TEST(HAlpha, RoughDataHasLargerH2Norm) {
  Grid1D g(1024, pi);
  const double rough = sobolev_norm(h_alpha_random(2.0 / 3.0, 11, g), 2.0);
  const double smooth = sobolev_norm(h_alpha_random(5.0, 11, g), 2.0);
  EXPECT_GT(rough / smooth, 10.0);
}

TEST(HAlpha, SobolevNormsMonotoneInAlpha) {
  Grid1D g(512, pi);
  const double alphas[] = {2.0 / 3.0, 2.0, 3.0, 5.0};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (double s : {1.0, 2.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double alpha : alphas) {
        const double norm = sobolev_norm(h_alpha_random(alpha, seed, g), s);
        EXPECT_LT(norm, prev) << "seed=" << seed << " s=" << s << " alpha=" << alpha;
        prev = norm;
      }
    }
  }
}

TEST(HAlpha, RejectsNonpositiveAlpha) {
  Grid1D g(64, pi);
  EXPECT_THROW(h_alpha_random(0.0, 1, g), std::invalid_argument);
}

TEST(FieldCsv, ReadBackWhatWasWritten) {
  Grid1D g(16, pi);
  const char* path = "initdata_roundtrip.csv";
  {
    std::ofstream out(path);
    out << "# two-column field\n";
    for (int a = 0; a < g.size(); ++a)
      out << 0.25 * a << "," << -0.5 * a << "\n";
  }
  ComplexField u = read_field_csv(path, g);
  for (int a = 0; a < g.size(); ++a) {
    EXPECT_DOUBLE_EQ(u[a].real(), 0.25 * a);
    EXPECT_DOUBLE_EQ(u[a].imag(), -0.5 * a);
  }
  std::remove(path);
}

TEST(FieldCsv, LengthMismatchIsError) {
  Grid1D g(16, pi);
  const char* path = "initdata_short.csv";
  {
    std::ofstream out(path);
    for (int a = 0; a < 10; ++a) out << a << ",0\n";
  }
  EXPECT_THROW(read_field_csv(path, g), std::invalid_argument);
  std::remove(path);
}
