#pragma once

#include <string>
#include <vector>

namespace ehcr {

// Which noise term the secondary outage expression uses: `literal` scales the
// SNR threshold by noise spectral density alone; `bandwidth` multiplies it by
// the channel bandwidth so the units match the primary link expression.
enum class Eq7Mode { literal, bandwidth };

std::string to_string(Eq7Mode mode);
Eq7Mode eq7_mode_from_string(const std::string& s);

// Physical and traffic parameters of one primary/secondary spectrum-sharing
// scenario. Defaults are the baseline evaluation setup.
struct SystemParams {
  double slot_duration_s = 1.0;       // T, full slot length
  double sensing_duration_s = 0.1;    // tau, spent sensing before SU transmission
  double bandwidth_hz = 1e3;          // W
  double noise_psd_w_per_hz = 1e-6;   // N0
  double packet_bits = 1e3;           // beta, payload per packet
  double primary_power_w = 1e-2;      // PU transmit power
  double primary_arrival_rate = 0.4;  // lambda_p, packets per slot (Bernoulli)
  double energy_arrival_rate = 1.0;   // lambda_e, energy packets per second (Poisson)
  double energy_per_packet_j = 1e-3;  // e, Joules per harvested/spent energy packet
  int energy_capacity = 4;            // E_max, buffer size in energy packets
  double gain_ppd = 0.5;              // average channel gain, PU -> its receiver
  double gain_ssd = 1.0;              // average channel gain, SU -> its receiver
  Eq7Mode eq7 = Eq7Mode::literal;

  // Spectral efficiencies implied by delivering one packet within the
  // available transmission time.
  double primary_spectral_efficiency() const {
    return packet_bits / (slot_duration_s * bandwidth_hz);
  }
  double secondary_spectral_efficiency() const {
    return packet_bits / ((slot_duration_s - sensing_duration_s) * bandwidth_hz);
  }

  // Mean energy packets harvested per slot.
  double harvest_per_slot() const { return energy_arrival_rate * slot_duration_s; }

  // All constraint violations, empty when the parameters are usable.
  std::vector<std::string> check() const;

  // Throws ValidationError listing every violation.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

}  // namespace ehcr
