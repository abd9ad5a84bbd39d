// SPDX-License-Identifier: Apache-2.0

#include "stbc/bitmask.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace stbc {

int weight(std::uint64_t x) { return std::popcount(x); }

std::uint64_t two_plus(int x) {
  if (x == -1) return 0;
  if (x < -1) throw std::invalid_argument("two_plus: exponent below -1");
  if (x > 62) throw std::overflow_error("two_plus: exponent too large");
  return std::uint64_t{1} << x;
}

std::uint64_t complement_mod(std::uint64_t x, int a) {
  if (a < 1 || a > 63) throw std::invalid_argument("complement_mod: bad modulus");
  std::uint64_t mask = (std::uint64_t{1} << a) - 1;
  if (x > mask) throw std::out_of_range("complement_mod: value outside Z_{2^a}");
  return (std::uint64_t{1} << a) - x & mask;
}

SizePair size_pair(int t) {
  if (t < 2) throw std::invalid_argument("size_pair: need at least 2 antennas");
  if (t > 63) throw std::invalid_argument("size_pair: delay exceeds 64 bits");
  int l = (t + 1) / 2;  // t = 2l-1 or 2l
  mpz_class k, c2l;
  mpz_bin_uiui(k.get_mpz_t(), 2 * l - 1, l);
  mpz_bin_uiui(c2l.get_mpz_t(), 2 * l, l);
  // l/(l+1) * C(2l, l) = l * Catalan(l); the division is exact.
  mpz_class p = c2l / (l + 1) * l;
  if (t % 2 == 0) {
    k *= 2;
    p *= 2;
  }
  if (!k.fits_ulong_p() || !p.fits_ulong_p())
    throw std::overflow_error("size_pair: result does not fit in 64 bits");
  return SizePair{k.get_ui(), p.get_ui()};
}

std::uint64_t IndexMaps::f(std::size_t i) const {
  if (i >= r_set.size()) throw std::out_of_range("IndexMaps::f");
  return r_set[i];
}

std::uint64_t IndexMaps::g(std::size_t i) const {
  if (i >= c_set.size()) throw std::out_of_range("IndexMaps::g");
  return c_set[i];
}

IndexMaps build_index_maps(int a) {
  if (a < 1) throw std::invalid_argument("build_index_maps: a must be positive");
  if (a > 22) throw std::invalid_argument("build_index_maps: a too large for dense tables");
  int h = (a + 1) / 2;  // ceil(a/2)
  IndexMaps m;
  m.a = a;
  std::uint64_t size = std::uint64_t{1} << a;
  m.r_index_.assign(size, -1);
  m.c_index_.assign(size, -1);
  for (std::uint64_t v = 0; v < size; ++v) {
    int w = weight(v);
    // Weight classes below 0 are simply empty; no special casing for small a.
    if (w >= h - 2 && w <= h + 1) {
      m.r_index_[v] = static_cast<int>(m.r_set.size());
      m.r_set.push_back(v);
    }
    if (w >= h - 1 && w <= h) {
      m.c_index_[v] = static_cast<int>(m.c_set.size());
      m.c_set.push_back(v);
    }
  }
  return m;
}

std::vector<std::uint64_t> neighbor_rows(std::uint64_t i, int a) {
  if (a < 1 || a > 63) throw std::invalid_argument("neighbor_rows: bad a");
  if (i >> a != 0) throw std::out_of_range("neighbor_rows: index outside Z_{2^a}");
  std::vector<std::uint64_t> rows;
  rows.reserve(a + 1);
  rows.push_back(i);
  for (int j = 0; j < a; ++j) rows.push_back(i ^ (std::uint64_t{1} << j));
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace stbc
