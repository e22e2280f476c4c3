#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "retina/physics_bounds.hpp"

using namespace retina;

namespace {

// Hand-entered CODATA values, independent of the library's constants.
constexpr double h = 6.62607015e-34, c = 299792458.0, kB = 1.380649e-23, hbar = 1.054571817e-34,
                 muB = 9.2740100783e-24;

}  // namespace

TEST(Physics, DefaultEyeTemperatureRise) {
  const EyeThermalModel eye;
  const double dtheta = 50 * h * c / (532e-9 * 0.01 * 4000);
  EXPECT_NEAR(temperature_resolution(eye) / dtheta, 1.0, 1e-12);
  EXPECT_NEAR(temperature_resolution(eye), 4.667e-19, 0.001e-19);
  EXPECT_NEAR(photon_energy(eye), 3.734e-19, 0.001e-19);
}

TEST(Physics, EnergyResolutions) {
  const EyeThermalModel eye;
  EXPECT_NEAR(thermal_energy_resolution(eye), 6.111e-9, 0.001e-9);
  EXPECT_NEAR(thermal_energy_resolution(1e-19, 1.0), kB * 1e-19 / hbar, 1e-21);
  EXPECT_NEAR(magnetic_energy_resolution(1e-19, 1.0), 8.794e-9, 0.001e-9);
  EXPECT_NEAR(magnetic_energy_resolution(1e-19, 4.0), muB * 1e-19 * 2.0 / hbar, 1e-20);
}

TEST(Physics, LinearInTheirInputs) {
  EXPECT_NEAR(thermal_energy_resolution(3e-19, 2.0), 6 * thermal_energy_resolution(1e-19, 1.0), 1e-20);
  EXPECT_NEAR(magnetic_energy_resolution(5e-19, 1.0), 5 * magnetic_energy_resolution(1e-19, 1.0), 1e-20);
  EyeThermalModel doubled;
  doubled.n_scattered = 100;
  EXPECT_NEAR(temperature_resolution(doubled), 2 * temperature_resolution(EyeThermalModel{}), 1e-30);
  doubled.mass = 0.02;
  EXPECT_NEAR(temperature_resolution(doubled), temperature_resolution(EyeThermalModel{}), 1e-30);
}

TEST(Physics, ZeroTimeResolvesNothing) {
  EXPECT_EQ(thermal_energy_resolution(4.667e-19, 0.0), 0.0);
  EXPECT_THROW(magnetic_energy_resolution(1e-19, 0.0), std::domain_error);
}

TEST(Physics, ThermalOverloadComposes) {
  EyeThermalModel eye;
  eye.pulse_time = 0.37;
  eye.wavelength = 600e-9;
  EXPECT_DOUBLE_EQ(thermal_energy_resolution(eye), thermal_energy_resolution(temperature_resolution(eye), 0.37));
}

TEST(Physics, DipoleFalloff) {
  EXPECT_NEAR(dipole_attenuation(0.1, 1.0), 1000.0, 1e-9);
  EXPECT_NEAR(dipole_attenuation(1.0, 2.0), 8.0, 1e-12);
  EXPECT_THROW(dipole_attenuation(0.0, 1.0), std::domain_error);
}

TEST(Physics, RejectsNonPhysicalInputs) {
  EyeThermalModel eye;
  eye.mass = 0;
  EXPECT_THROW(temperature_resolution(eye), std::domain_error);
  eye = {};
  eye.wavelength = -1;
  EXPECT_THROW(photon_energy(eye), std::domain_error);
  EXPECT_THROW(thermal_energy_resolution(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(magnetic_energy_resolution(1e-19, -1.0), std::domain_error);
}
