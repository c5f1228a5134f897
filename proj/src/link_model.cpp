#include "ehcr/link_model.hpp"

#include <cmath>

#include "ehcr/errors.hpp"

namespace ehcr {

double primary_success_prob(const SystemParams& params) {
  params.validate();
  const double snr_threshold = std::exp2(params.primary_spectral_efficiency()) - 1.0;
  const double gain_threshold =
      params.noise_psd_w_per_hz * params.bandwidth_hz * snr_threshold / params.primary_power_w;
  return std::exp(-gain_threshold / params.gain_ppd);
}

double secondary_success_prob(const SystemParams& params, int energy_packets) {
  params.validate();
  if (energy_packets < 0)
    throw ValidationError("secondary_success_prob: energy_packets must be nonnegative");
  if (energy_packets == 0) return 0.0;

  const double tx_window_s = params.slot_duration_s - params.sensing_duration_s;
  const double tx_power_w = energy_packets * params.energy_per_packet_j / tx_window_s;
  const double snr_threshold = std::exp2(params.secondary_spectral_efficiency()) - 1.0;
  double noise_w = params.noise_psd_w_per_hz;
  if (params.eq7 == Eq7Mode::bandwidth) noise_w *= params.bandwidth_hz;
  const double gain_threshold = noise_w * snr_threshold / tx_power_w;
  return std::exp(-gain_threshold / params.gain_ssd);
}

}  // namespace ehcr
