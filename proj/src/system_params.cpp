#include "ehcr/system_params.hpp"

#include <cmath>
#include <sstream>

#include "ehcr/errors.hpp"

namespace ehcr {

std::string to_string(Eq7Mode mode) {
  return mode == Eq7Mode::literal ? "literal" : "bandwidth";
}

Eq7Mode eq7_mode_from_string(const std::string& s) {
  if (s == "literal") return Eq7Mode::literal;
  if (s == "bandwidth") return Eq7Mode::bandwidth;
  throw ValidationError("unknown eq7 mode '" + s + "' (expected literal|bandwidth)");
}

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::vector<std::string> SystemParams::check() const {
  std::vector<std::string> errs;
  auto bad = [&errs](const std::string& msg) { errs.push_back(msg); };

  if (!finite(slot_duration_s) || slot_duration_s <= 0.0)
    bad("slot_duration_s must be positive");
  if (!finite(sensing_duration_s) || sensing_duration_s < 0.0)
    bad("sensing_duration_s must be nonnegative");
  else if (finite(slot_duration_s) && sensing_duration_s >= slot_duration_s)
    bad("sensing_duration_s must be smaller than slot_duration_s");
  if (!finite(bandwidth_hz) || bandwidth_hz <= 0.0) bad("bandwidth_hz must be positive");
  if (!finite(noise_psd_w_per_hz) || noise_psd_w_per_hz <= 0.0)
    bad("noise_psd_w_per_hz must be positive");
  if (!finite(packet_bits) || packet_bits <= 0.0) bad("packet_bits must be positive");
  if (!finite(primary_power_w) || primary_power_w <= 0.0)
    bad("primary_power_w must be positive");
  if (!finite(primary_arrival_rate) || primary_arrival_rate < 0.0 ||
      primary_arrival_rate > 1.0)
    bad("primary_arrival_rate must lie in [0, 1]");
  if (!finite(energy_arrival_rate) || energy_arrival_rate < 0.0)
    bad("energy_arrival_rate must be nonnegative");
  if (!finite(energy_per_packet_j) || energy_per_packet_j <= 0.0)
    bad("energy_per_packet_j must be positive");
  if (energy_capacity < 0) bad("energy_capacity must be nonnegative");
  if (!finite(gain_ppd) || gain_ppd <= 0.0) bad("gain_ppd must be positive");
  if (!finite(gain_ssd) || gain_ssd <= 0.0) bad("gain_ssd must be positive");
  return errs;
}

void SystemParams::validate() const {
  const auto errs = check();
  if (errs.empty()) return;
  std::ostringstream oss;
  oss << "invalid system parameters:";
  for (const auto& e : errs) oss << "\n  - " << e;
  throw ValidationError(oss.str());
}

}  // namespace ehcr
