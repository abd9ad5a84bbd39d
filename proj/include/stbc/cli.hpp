// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface for stbc-forge. Thin dispatch over the library;
// every computation lives behind a tested library call.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stbc/design.hpp"

namespace stbc {

// Builds the design a command line names. families: square, tilde, maximal,
// hprime, hat4m, paired, cis. antennas is the transmit antenna count of the
// target maximal-rate design (square wants a power of two, hat4m a multiple
// of four); l is the row-pairing shift used by paired and cis. Throws
// std::invalid_argument on a combination outside the family's domain.
DesignMatrix family_design(const std::string& family, int antennas, std::uint64_t l);

// Parses "start:step:stop" (inclusive, step > 0) or a single value into an
// SNR grid in dB. Throws std::invalid_argument on malformed input.
std::vector<double> parse_snr_grid(const std::string& text);

// Full CLI: returns the process exit code. 0 success, 1 verification
// failure, 2 bad arguments or i/o trouble.
int run_cli(int argc, char** argv);

}  // namespace stbc
