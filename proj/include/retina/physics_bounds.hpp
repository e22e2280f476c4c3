#pragma once

namespace retina {

namespace constants {
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double speed_of_light = 299792458.0;     // m / s
inline constexpr double boltzmann = 1.380649e-23;         // J / K
inline constexpr double bohr_magneton = 9.2740100783e-24; // J / T
}  // namespace constants

/// Heat deposited in the eye by the light that the interrogation scatters.
struct EyeThermalModel {
  double mass = 0.01;            // kg
  double specific_heat = 4000.0; // J / (kg K)
  double wavelength = 532e-9;    // m
  double n_scattered = 50.0;     // photons
  double pulse_time = 0.1;       // s

  /// Throws std::domain_error unless every field is > 0.
  void validate() const;
};

/// Energy of one photon at the model's wavelength, h c / lambda.
double photon_energy(const EyeThermalModel& model);

/// Temperature rise of the eye: n_s h c / (lambda m c_w).
double temperature_resolution(const EyeThermalModel& model);

/// k_B * delta_theta * tau / hbar for a given temperature step and time.
double thermal_energy_resolution(double delta_theta, double tau);

/// The above with delta_theta = temperature_resolution(model), tau = pulse_time.
double thermal_energy_resolution(const EyeThermalModel& model);

/// mu_B * B * tau / hbar with B = sensitivity / sqrt(tau), i.e. the field
/// noise reached by averaging a T/sqrt(Hz) sensitivity over tau seconds.
double magnetic_energy_resolution(double field_sensitivity, double measurement_time);

/// Ratio by which a dipole field falls from distance r_near to r_far.
double dipole_attenuation(double r_near, double r_far);

}  // namespace retina
