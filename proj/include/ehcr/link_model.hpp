#pragma once

#include "ehcr/system_params.hpp"

namespace ehcr {

// Probability that a primary transmission survives its Rayleigh channel:
// the packet goes through when the instantaneous capacity over the full slot
// carries packet_bits, i.e. the exponential channel gain clears the SNR
// threshold implied by the primary spectral efficiency.
double primary_success_prob(const SystemParams& params);

// Probability that a secondary transmission powered by j energy packets
// survives its channel. The SU transmits at power j*e/(T - tau) over the
// post-sensing window; j == 0 means silence and returns 0. The Eq7Mode
// selects whether the noise term is N0 alone (`literal`) or N0*W
// (`bandwidth`).
double secondary_success_prob(const SystemParams& params, int energy_packets);

}  // namespace ehcr
