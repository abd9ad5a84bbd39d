// SPDX-License-Identifier: Apache-2.0
//
// Generators for the design families: square designs, their balanced
// restrictions, the maximal-rate non-square designs, the one-column
// extension for antenna counts divisible by four, and the row-paired /
// coordinate-interleaved variants.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stbc/bitmask.hpp"
#include "stbc/design.hpp"

namespace stbc {

// Closed-form cell map for the square design on 2^a antennas. Empty when
// the cell is zero, which happens exactly when i xor j is neither zero nor
// a single bit below 2^a. Agrees with the recursive construction cell for
// cell; the recursion is kept as an independent cross-check.
std::optional<CodAtom> square_cod_maps(std::uint64_t i, std::uint64_t j, int a);

// 2^a x 2^a design in a+1 variables, built by the doubling recursion.
// Materialization is capped at a <= 10; the cell map above has no such cap.
DesignMatrix square_cod(int a);

// Restriction of the square design to the balanced column class and the
// rows that survive it, with the conjugation of variable 0 flipped when
// a mod 4 is 1 or 2. Size [p_{a+1}, k_{a+1}] in a+1 variables.
DesignMatrix build_tilde(int a);

// Swaps the roles of column index and variable index row by row: an entry
// +-x_v^(tau) in column c becomes +-y_c^(tau) in column v. Requires an
// atom-entry design whose rows each carry a single conjugation state.
DesignMatrix transpose_to_maximal(const DesignMatrix& tilde);

// Direct index-map construction of the same family; equals
// transpose_to_maximal(build_tilde(a)) cell for cell. Size
// [p_{a+1}, a+1, k_{a+1}].
DesignMatrix h_prime(int a);

// h_prime(4m-2) extended by one column keyed to the all-ones shift.
// Size [p_{4m-1}, 4m, k_{4m-1}], same rate as the 4m-antenna family.
DesignMatrix hat_4m(int m);

// Pairing of rows and variables under the xor shift l. Rows i < j pair
// when f(i) xor f(j) = l; variables u < v pair when g(u) xor g(v) = l; a
// variable is isolated when g(u) xor l falls outside the column class.
struct PairingPlan {
  std::uint64_t l = 0;
  std::vector<std::pair<int, int>> row_pairs;
  std::vector<int> unpaired_rows;
  std::vector<std::pair<int, int>> var_pairs;
  std::vector<int> isolated_vars;

  // Every row in [0, p) and every variable in [0, k) must appear exactly
  // once across the respective pair/unpaired lists. Throws
  // std::invalid_argument otherwise.
  void validate(int p, int k) const;
};

PairingPlan make_pairing_plan(int a, std::uint64_t l);

// Unitary row mixes: each row pair (i, j) becomes (Ro_i + Ro_j)/sqrt(2)
// stored at i and (Ro_i - Ro_j)/sqrt(2) stored at j. Unpaired rows are
// untouched. Preserves the Gram exactly.
DesignMatrix apply_row_pairs(const DesignMatrix& d, const PairingPlan& plan);

// apply_row_pairs on h_prime(a) with the plan for shift l.
std::pair<DesignMatrix, PairingPlan> pair_rows(int a, std::uint64_t l);

// Substitutes each variable pair (u, v) by the rotated combinations
// y_u = (x_u + x_v)/sqrt(2), y_v = (x_u - x_v)/sqrt(2) and keeps isolated
// variables as they are. The substitution is orthogonal on the real
// coordinates, so the Gram and the zero pattern are unchanged.
DesignMatrix cis_substitute(const DesignMatrix& m, const PairingPlan& plan);

}  // namespace stbc
