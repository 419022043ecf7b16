#include <gtest/gtest.h>

#include "gravphon/dynamics.hpp"

using namespace gravphon;

namespace {

const double kMc = 1.19 * kConstants.solar_mass;
const double kW = 2 * kPi * 100;

MonochromaticWave sine(double h0, double nu, double t_end) { return {h0, nu, 0.0, {0.0, t_end}}; }

}  // namespace

TEST(Dynamics, ChiOfZeroSignalIsZero) {
  StrainSignal s = sine(0.0, kW, 1.0);
  EXPECT_EQ(chi_quadrature(s, kW, {0.0, 1.0}).value, 0.0);
}

// At omega = nu the integral of h0 nu^2 sin(nu s) e^{i nu s} over [0, t] is
// elementary; its modulus is |h0 nu (e^{2 i nu t} - 1) / 4 - i h0 nu^2 t / 2|.
TEST(Dynamics, QuadratureMatchesExactResonantIntegral) {
  const double h0 = 1e-21, nu = kW;
  for (double t : {0.5, 1.37, 3.0}) {
    StrainSignal s = sine(h0, nu, t);
    const std::complex<double> i(0, 1);
    const std::complex<double> exact =
        -h0 * nu * nu * ((std::exp(2.0 * i * nu * t) - 1.0) / (4.0 * nu) - i * t / 2.0) * i;
    const double chi = chi_quadrature(s, nu, {0.0, t}).value;
    EXPECT_NEAR(chi / std::abs(exact), 1.0, 1e-6) << "t=" << t;
  }
}

TEST(Dynamics, ResonantChiApproachesLinearGrowth) {
  // Whole number of cycles kills the counter-rotating term; nu t = 1e4.
  const double h0 = 1e-21, nu = 2 * kPi;
  const double t = 1e4 / nu;
  const double t_cycles = std::round(t * nu / (2 * kPi)) * 2 * kPi / nu;
  StrainSignal s = sine(h0, nu, t_cycles);
  const double chi = chi_quadrature(s, nu, {0.0, t_cycles}).value;
  EXPECT_NEAR(chi / (h0 * nu * nu * t_cycles / 2), 1.0, 1e-4);
}

TEST(Dynamics, TimeReversalSymmetry) {
  StrainSignal s = sine(1e-21, kW * 1.01, 2.0);
  QuadratureOptions minus;
  minus.sign = -1;
  EXPECT_NEAR(chi_quadrature(s, kW, {0, 2}).value / chi_quadrature(s, kW, {0, 2}, minus).value, 1.0,
              1e-9);
}

TEST(Dynamics, MonochromaticClosedForm) {
  const double h0 = 1e-21, nu = kW;
  EXPECT_DOUBLE_EQ(chi_monochromatic(h0, nu, nu, 2.0).value, h0 * nu * nu);
  const double t = 2.0, delta = 2 * kPi / t;  // delta t / 2 = pi
  EXPECT_NEAR(chi_monochromatic(h0, nu, nu + delta, t).value, 0.0, 1e-12 * h0 * nu * nu * t);
  EXPECT_FALSE(chi_monochromatic(h0, nu, nu + delta, t).regime_warning);
  EXPECT_TRUE(chi_monochromatic(h0, nu, 3 * nu, t).regime_warning);
}

TEST(Dynamics, ClosedFormAgreesWithQuadrature) {
  const double h0 = 1e-21, nu = kW;
  const double t = 600.0 / nu * 2 * kPi;  // 600 cycles, nu t > 500
  for (double rel : {0.0, 2e-4, 8e-4}) {
    const double w = nu * (1 + rel);
    StrainSignal s = sine(h0, nu, t);
    const double q = chi_quadrature(s, w, {0.0, t}).value;
    const double c = chi_monochromatic(h0, nu, w, t).value;
    EXPECT_NEAR(c / q, 1.0, 0.02) << rel;
  }
}

TEST(Dynamics, QuadratureNonConvergenceCarriesEstimate) {
  StrainSignal s = sine(1e-21, kW, 10.0);
  QuadratureOptions o;
  o.max_refinements = 0;
  o.rel_tol = 1e-15;
  try {
    chi_quadrature(s, kW, {0.0, 10.0}, o);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_GT(e.last_estimate(), 0.0);
  }
}

TEST(Dynamics, ChirpAnalytic) {
  const double k = chirp_rate_k(kMc);
  const auto r = chi_chirp_analytic(2e-22, k, kW);
  EXPECT_NEAR(r.value / 1.09049330067574048e-17, 1.0, 1e-12);
  EXPECT_NEAR(r.value / (2e-22 * kW * kW * resonance_crossing_time(k, kW) / 2), 1.0, 1e-12);
  EXPECT_NEAR(chi_chirp_analytic(2e-22, k, 2 * kW).value / r.value, std::pow(2.0, 1.0 / 6.0), 1e-12);
  EXPECT_FALSE(r.regime_warning);
}

// Oracle value from an independent 4e6-point Simpson integration in numpy of
// the same resonant chirp over +-5 tau: 9.955377758e-18.
TEST(Dynamics, ChirpMethodsAgree) {
  const ChirpSource c = resonant_chirp(kMc, 2e-22, kW, 50.0, 4.0);
  const Interval win = default_chirp_window(c, kW);
  const double q = chi_quadrature(c, kW, win).value;
  EXPECT_NEAR(q / 9.955377758267976e-18, 1.0, 1e-5);
  const double sp = chi_stationary_phase(c, kW).value;
  const double an = chi_chirp_analytic(2e-22, c.k(), kW).value;
  EXPECT_NEAR(sp / q, 1.0, 0.10);
  EXPECT_NEAR(an / q, 1.0, 0.15);
  EXPECT_NEAR(an / sp, 1.0, 0.25);
}

TEST(Dynamics, StationaryPointLocation) {
  ChirpSource c;
  c.chirp_mass = kMc;
  c.amplitude = 2e-22;
  c.nu0 = 2 * kPi * 30;
  c.support = {0.0, coalescence_time(c.nu0, c.k()) * 0.9999};
  const double s = c.resonance_time(kW);
  EXPECT_NEAR(c.frequency_at(s) / kW, 1.0, 1e-9);
  EXPECT_NO_THROW(chi_stationary_phase(c, kW));
  EXPECT_THROW(chi_stationary_phase(c, 2 * kPi * 20), DomainError);
  EXPECT_THROW(chi_stationary_phase(c, kW, Interval{0.0, s * 0.5}), DomainError);
}

TEST(Dynamics, BetaChiConsistency) {
  const auto spec = DetectorSpec::for_frequency(materials::beryllium(), kW, 21.73);
  const ChirpSource c = resonant_chirp(kMc, 2e-22, kW, 50.0, 4.0);
  const Interval win = default_chirp_window(c, kW);
  const auto b = displacement_beta(spec, c, win);
  EXPECT_NEAR(b.magnitude() / (beta_coupling(spec) * b.chi), 1.0, 1e-12);
  EXPECT_GT(b.magnitude(), 0.5);  // order unity for the 21.73 kg bar
  EXPECT_LT(b.magnitude(), 2.0);
  StrainSignal zero = sine(0.0, kW, 1.0);
  EXPECT_EQ(displacement_beta(spec, zero, {0.0, 1.0}).magnitude(), 0.0);
}

TEST(Dynamics, OptimalMassFixedPoint) {
  const ChirpSource c = resonant_chirp(kMc, 2e-22, kW, 50.0, 4.0);
  const Interval win = default_chirp_window(c, kW);
  const double chi = chi_quadrature(c, kW, win).value;
  for (int l : {1, 3}) {
    const double m = optimal_mass(materials::beryllium(), chi, kW, l);
    const auto spec = DetectorSpec::for_frequency(materials::beryllium(), kW, m, l);
    EXPECT_NEAR(displacement_beta(spec, c, win).magnitude(), 1.0, 1e-9);
  }
  EXPECT_THROW(optimal_mass(materials::beryllium(), 0.0, kW), DomainError);
}

TEST(Dynamics, OptimalMassChirpAnalytic) {
  const double m = optimal_mass_chirp_analytic(materials::beryllium(), 2e-22, kMc, kW);
  EXPECT_NEAR(m / 13.6750340782157023, 1.0, 1e-10);
  EXPECT_NEAR(m / 15.0, 1.0, 0.3);
  // same value through chi_chirp_analytic and the general formula
  const double chi = chi_chirp_analytic(2e-22, chirp_rate_k(kMc), kW).value;
  EXPECT_NEAR(optimal_mass(materials::beryllium(), chi, kW) / m, 1.0, 1e-12);
  EXPECT_NEAR(optimal_mass_chirp_analytic(materials::beryllium(), 2e-22, kMc, 2 * kW) / m,
              std::pow(2.0, 8.0 / 3.0), 1e-12);
  EXPECT_NEAR(optimal_mass_chirp_analytic(materials::beryllium(), 4e-22, kMc, kW) / m, 0.25, 1e-12);
}

TEST(Dynamics, PoissonProbabilities) {
  EXPECT_NEAR(excitation_probability(1.0, 1), std::exp(-1.0), 1e-15);
  EXPECT_EQ(excitation_probability(0.0, 0), 1.0);
  EXPECT_EQ(excitation_probability(0.0, 2), 0.0);
  EXPECT_THROW(excitation_probability(1.0, -1), DomainError);
  for (double b : {0.1, 1.0, 2.2, 3.0}) {
    double sum = 0;
    for (int n = 0; n <= 50; ++n) sum += excitation_probability(b, n);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  int best = 1;
  for (int n = 2; n < 10; ++n)
    if (excitation_probability(1.0, n) > excitation_probability(1.0, best)) best = n;
  EXPECT_EQ(best, 1);
  // P_1 as a function of |beta| peaks at 1
  EXPECT_GT(excitation_probability(1.0, 1), excitation_probability(0.95, 1));
  EXPECT_GT(excitation_probability(1.0, 1), excitation_probability(1.05, 1));
}

TEST(Dynamics, ThresholdProbability) {
  auto spec = DetectorSpec::for_frequency(materials::aluminum(), kW, 1.0);
  const double h0 = 1e-24, t = 1.0;
  const double b = beta_coupling(spec) * chi_monochromatic(h0, kW, kW, t).value;
  EXPECT_NEAR(threshold_probability(spec, h0, kW, t) / (b * b), 1.0, 1e-12);
  EXPECT_LT(b * b, 1e-3);
  // first-order Poisson term
  EXPECT_NEAR(excitation_probability(b, 1) / threshold_probability(spec, h0, kW, t), 1.0, 2e-3);
  EXPECT_EQ(threshold_probability(spec, h0, kW, 0.0), 0.0);
  const double far = threshold_probability(spec, h0, 0.5 * kW, 100.0);
  EXPECT_LT(far, 1e-6 * threshold_probability(spec, h0, kW, 100.0));
}
