// SPDX-License-Identifier: Apache-2.0
//
// Rate, delay, zero counting (direct and closed form), per-column
// duplicate counts for the row-paired families, and exact PAPR evaluation
// over finite constellations.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "stbc/design.hpp"

namespace stbc {

// (number of zero cells) / (p * n), exact.
mpq_class zero_fraction_counted(const DesignMatrix& design);

// Closed-form zero fraction of the row-paired design on n+1 antennas under
// shift l; depends on l only through its Hamming weight. The counted value
// is authoritative: table1_rows reports both and flags any mismatch
// instead of adjusting either side.
mpq_class zero_fraction_formula(int n, std::uint64_t l);

struct DuplicateCounts {
  std::vector<long> per_column;
  mpq_class average;
};

// For each column of the row-paired design M_n(l): the number of variables
// that occur in two entries of that column on their own (such a variable
// is an unpaired one duplicated by the row mix; variables shared between
// two-variable entries are not counted). Computed by inspecting the
// constructed matrix, and tied to the zero fraction by
// F = 1 - (k + average) / p.
DuplicateCounts duplicate_counts(int n, std::uint64_t l);

// Unnormalized lattice points with their average energy; PAPR is a power
// ratio, so the normalization constant cancels and the arithmetic stays
// exact even when the unit-energy scaling would leave the field.
struct Constellation {
  std::string name;
  std::vector<Sqrt2Complex> points;
  Sqrt2Rational mean_energy;

  static Constellation qpsk();
  static Constellation qam16();
};

// Per-antenna peak-to-average power ratio under independent uniform
// symbols, by exact enumeration over the symbols referenced by each entry
// (at most two variables per entry). The average spans all slots of the
// codeword unless include_zero_slots is false, in which case only slots
// with a nonzero entry count. Throws std::domain_error for an all-zero
// column and std::invalid_argument when an entry references more than two
// variables.
std::vector<Sqrt2Rational> papr(const DesignMatrix& design, const Constellation& c,
                                bool include_zero_slots = true);

// Largest instantaneous squared entry magnitude over all slots, antennas,
// and symbol assignments, on the unnormalized constellation lattice. Zero
// for an all-zero design.
Sqrt2Rational peak_instantaneous_energy(const DesignMatrix& design, const Constellation& c);

struct DesignMetrics {
  mpq_class rate;
  long delay = 0;
  mpq_class zero_fraction;
  std::vector<Sqrt2Rational> per_antenna_papr;  // empty without a constellation
};

DesignMetrics design_metrics(const DesignMatrix& design, const Constellation* c = nullptr);

struct Table1Row {
  int n = 0;
  int w = 0;
  mpq_class counted;
  mpq_class formula;
  bool match = false;
};

// One row per (n, weight) with the counted fraction taken from the
// canonical shift of that weight (low bits set) and the closed form next
// to it.
std::vector<Table1Row> table1_rows(int n_min, int n_max);

}  // namespace stbc
