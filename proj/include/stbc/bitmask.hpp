// SPDX-License-Identifier: Apache-2.0
//
// Bitmask machinery over Z_{2^a}: Hamming weights, the row/column index
// classes R_a and C_a with their ascending bijections f and g, the
// nonzero-row neighborhoods of square-design columns, and the exact
// size/delay formulas for maximal-rate designs.

#pragma once

#include <cstdint>
#include <vector>

namespace stbc {

// Number of set bits.
int weight(std::uint64_t x);

// 2^x extended so that exponent -1 gives 0. Exponents below -1 never arise
// in the constructions; the function rejects them loudly rather than pick a
// value. Exponents above 62 would overflow and are rejected as well.
std::uint64_t two_plus(int x);

// (2^a - x) mod 2^a, the additive complement used by the sign maps.
std::uint64_t complement_mod(std::uint64_t x, int a);

// Number of complex variables (k) and decoding delay (p) of the
// maximal-rate non-square design for t transmit antennas.
struct SizePair {
  std::uint64_t k = 0;
  std::uint64_t p = 0;
};

// k_t = C(2l-1, l), p_t = l/(l+1) * C(2l, l) for t = 2l-1; both double when
// moving from t-1 odd to t even. Exact big-integer evaluation; valid for
// 2 <= t <= 63 (the largest t whose delay fits in 64 bits).
SizePair size_pair(int t);

// Weight classes of Z_{2^a} around h = ceil(a/2):
//   R_a = { i : ||i|| in [h-2, h+1] },  C_a = { i : ||i|| in [h-1, h] }.
// f enumerates R_a ascending, g enumerates C_a ascending. |R_a| = p_{a+1}
// and |C_a| = k_{a+1}.
struct IndexMaps {
  int a = 0;
  std::vector<std::uint64_t> r_set;  // f(i) = r_set[i]
  std::vector<std::uint64_t> c_set;  // g(i) = c_set[i]

  std::uint64_t f(std::size_t i) const;
  std::uint64_t g(std::size_t i) const;
  bool in_r(std::uint64_t v) const { return find(r_index_, v) >= 0; }
  bool in_c(std::uint64_t v) const { return find(c_index_, v) >= 0; }
  // Positions under the ascending enumerations; -1 when absent.
  int f_inv(std::uint64_t v) const { return find(r_index_, v); }
  int g_inv(std::uint64_t v) const { return find(c_index_, v); }

  std::size_t rows() const { return r_set.size(); }
  std::size_t cols() const { return c_set.size(); }

 private:
  friend IndexMaps build_index_maps(int a);
  static int find(const std::vector<int>& table, std::uint64_t v) {
    return v < table.size() ? table[v] : -1;
  }
  std::vector<int> r_index_;  // value -> f^-1(value), -1 if not in R_a
  std::vector<int> c_index_;
};

// Requires 1 <= a <= 22 (the lookup tables are dense in 2^a).
IndexMaps build_index_maps(int a);

// Row indices of the nonzero entries of column i of the 2^a-square design:
// {i} union {i xor 2^j, j < a}. Sorted; always a+1 elements.
std::vector<std::uint64_t> neighbor_rows(std::uint64_t i, int a);

}  // namespace stbc
