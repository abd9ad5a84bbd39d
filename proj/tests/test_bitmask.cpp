// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <random>
#include <set>

#include "doctest.h"
#include "stbc/bitmask.hpp"

using namespace stbc;

namespace {
std::uint64_t binom(int n, int k) {
  // Tiny Pascal-triangle oracle, nothing shared with the library.
  if (k < 0 || k > n || n < 0) return 0;
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}
}  // namespace

TEST_CASE("hamming weight") {
  CHECK(weight(0) == 0);
  CHECK(weight(0b10110) == 3);
  CHECK(weight(~std::uint64_t{0}) == 64);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t x = rng(), y = rng();
    CHECK(weight(x ^ y) == weight(x) + weight(y) - 2 * weight(x & y));
  }
}

TEST_CASE("extended power of two") {
  CHECK(two_plus(-1) == 0);
  CHECK(two_plus(0) == 1);
  CHECK(two_plus(5) == 32);
  CHECK_THROWS_AS(two_plus(-2), std::invalid_argument);
  CHECK_THROWS_AS(two_plus(63), std::overflow_error);
}

TEST_CASE("additive complement mod 2^a") {
  CHECK(complement_mod(0, 3) == 0);
  CHECK(complement_mod(1, 3) == 7);
  CHECK(complement_mod(5, 3) == 3);
  for (int a = 1; a <= 10; ++a)
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << a); ++x) {
      CHECK(complement_mod(complement_mod(x, a), a) == x);
      CHECK(((complement_mod(x, a) + x) & ((std::uint64_t{1} << a) - 1)) == 0);
    }
  CHECK_THROWS_AS(complement_mod(8, 3), std::out_of_range);
}

TEST_CASE("index classes for small a") {
  IndexMaps m1 = build_index_maps(1);
  CHECK(m1.c_set == std::vector<std::uint64_t>{0, 1});
  CHECK(m1.r_set == std::vector<std::uint64_t>{0, 1});

  IndexMaps m3 = build_index_maps(3);
  CHECK(m3.c_set == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});
  CHECK(m3.r_set.size() == 8);  // every element of Z_8 qualifies

  IndexMaps m4 = build_index_maps(4);
  CHECK(m4.cols() == 10);
  CHECK(m4.rows() == 15);

  CHECK_THROWS_AS(build_index_maps(0), std::invalid_argument);
}

TEST_CASE("bijections are ascending and invertible") {
  for (int a = 1; a <= 10; ++a) {
    IndexMaps m = build_index_maps(a);
    for (std::size_t i = 0; i + 1 < m.rows(); ++i) CHECK(m.f(i) < m.f(i + 1));
    for (std::size_t i = 0; i + 1 < m.cols(); ++i) CHECK(m.g(i) < m.g(i + 1));
    for (std::size_t i = 0; i < m.rows(); ++i)
      CHECK(m.f_inv(m.f(i)) == static_cast<int>(i));
    for (std::size_t i = 0; i < m.cols(); ++i)
      CHECK(m.g_inv(m.g(i)) == static_cast<int>(i));
    // Column class sits inside the row class.
    for (std::uint64_t v : m.c_set) CHECK(m.in_r(v));
  }
}

TEST_CASE("class sizes match the closed formulas") {
  for (int a = 1; a <= 12; ++a) {
    IndexMaps m = build_index_maps(a);
    SizePair s = size_pair(a + 1);
    CHECK(m.cols() == s.k);
    CHECK(m.rows() == s.p);
  }
  // Odd-index classes double the previous even-index ones and close in
  // central binomials.
  for (int a = 2; a <= 6; ++a) {
    CHECK(build_index_maps(2 * a - 1).cols() == 2 * build_index_maps(2 * a - 2).cols());
    CHECK(build_index_maps(2 * a - 1).rows() == 2 * build_index_maps(2 * a - 2).rows());
  }
  for (int a = 1; a <= 6; ++a) {
    CHECK(build_index_maps(2 * a - 1).cols() == 2 * binom(2 * a - 1, a));
    CHECK(build_index_maps(2 * a - 1).rows() == 2 * a * binom(2 * a, a) / (a + 1));
  }
}

TEST_CASE("size and delay formulas") {
  CHECK(size_pair(3).k == 3);
  CHECK(size_pair(3).p == 4);
  CHECK(size_pair(5).k == 10);
  CHECK(size_pair(5).p == 15);
  CHECK(size_pair(6).k == 20);
  CHECK(size_pair(6).p == 30);
  CHECK(size_pair(7).k == 35);
  CHECK(size_pair(7).p == 56);
  CHECK(size_pair(8).k == 70);
  CHECK(size_pair(8).p == 112);
  for (int t = 2; t <= 30; ++t) {
    SizePair s = size_pair(t);
    int l = (t + 1) / 2;
    // rate k/p = (l+1)/(2l)
    CHECK(s.k * 2 * l == s.p * (l + 1));
  }
  CHECK_THROWS_AS(size_pair(1), std::invalid_argument);
  CHECK_THROWS_AS(size_pair(64), std::invalid_argument);
  CHECK(size_pair(63).p > size_pair(62).p);  // still representable
}

TEST_CASE("column neighborhoods") {
  CHECK(neighbor_rows(0, 2) == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(neighbor_rows(5, 3) == std::vector<std::uint64_t>{1, 4, 5, 7});
  for (int a = 1; a <= 8; ++a)
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << a); ++i)
      CHECK(neighbor_rows(i, a).size() == static_cast<std::size_t>(a) + 1);
  CHECK_THROWS_AS(neighbor_rows(4, 2), std::out_of_range);
}

TEST_CASE("column neighborhoods cover exactly the row class") {
  for (int a = 1; a <= 10; ++a) {
    IndexMaps m = build_index_maps(a);
    std::set<std::uint64_t> covered;
    for (std::uint64_t c : m.c_set)
      for (std::uint64_t r : neighbor_rows(c, a)) covered.insert(r);
    CHECK(std::vector<std::uint64_t>(covered.begin(), covered.end()) == m.r_set);
  }
}

TEST_CASE("parity of column-class elements shifted by one bit") {
  // For i in C_a with i xor 2^s also in C_a, the quantity
  // ||i|| + ceil(a/2) + i_s is odd.
  for (int a = 1; a <= 10; ++a) {
    IndexMaps m = build_index_maps(a);
    int h = (a + 1) / 2;
    for (int s = 0; s < a; ++s)
      for (std::uint64_t i : m.c_set) {
        if (!m.in_c(i ^ (std::uint64_t{1} << s))) continue;
        int bit = static_cast<int>((i >> s) & 1);
        CHECK((weight(i) + h + bit) % 2 == 1);
      }
  }
}

TEST_CASE("two-bit shifts split the bits across the pair") {
  // For i in C_a with i xor 2^s xor 2^t also in C_a (s != t), exactly one
  // of the two bits of i is set.
  for (int a = 2; a <= 10; ++a) {
    IndexMaps m = build_index_maps(a);
    for (int s = 0; s < a; ++s)
      for (int t = 0; t < a; ++t) {
        if (s == t) continue;
        std::uint64_t mask = (std::uint64_t{1} << s) | (std::uint64_t{1} << t);
        for (std::uint64_t i : m.c_set) {
          if (!m.in_c(i ^ mask)) continue;
          int bs = static_cast<int>((i >> s) & 1);
          int bt = static_cast<int>((i >> t) & 1);
          CHECK(bs + bt == 1);
        }
      }
  }
}
