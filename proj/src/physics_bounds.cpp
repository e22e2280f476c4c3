#include "retina/physics_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace retina {

void EyeThermalModel::validate() const {
  if (!(mass > 0.0) || !(specific_heat > 0.0) || !(wavelength > 0.0) || !(n_scattered > 0.0) ||
      !(pulse_time > 0.0)) {
    throw std::domain_error("eye thermal model: every field must be > 0");
  }
}

double photon_energy(const EyeThermalModel& model) {
  model.validate();
  return constants::planck * constants::speed_of_light / model.wavelength;
}

double temperature_resolution(const EyeThermalModel& model) {
  return model.n_scattered * photon_energy(model) / (model.mass * model.specific_heat);
}

double thermal_energy_resolution(double delta_theta, double tau) {
  if (!(delta_theta >= 0.0) || !(tau >= 0.0)) throw std::domain_error("thermal_energy_resolution: inputs must be >= 0");
  return constants::boltzmann * delta_theta * tau / constants::hbar;
}

double thermal_energy_resolution(const EyeThermalModel& model) {
  return thermal_energy_resolution(temperature_resolution(model), model.pulse_time);
}

double magnetic_energy_resolution(double field_sensitivity, double measurement_time) {
  if (!(field_sensitivity > 0.0) || !(measurement_time > 0.0)) {
    throw std::domain_error("magnetic_energy_resolution: inputs must be > 0");
  }
  const double field = field_sensitivity / std::sqrt(measurement_time);
  return constants::bohr_magneton * field * measurement_time / constants::hbar;
}

double dipole_attenuation(double r_near, double r_far) {
  if (!(r_near > 0.0) || !(r_far > 0.0)) throw std::domain_error("dipole_attenuation: distances must be > 0");
  return std::pow(r_far / r_near, 3);
}

}  // namespace retina
