// SPDX-License-Identifier: Apache-2.0

#include "stbc/metrics.hpp"

#include <set>
#include <stdexcept>

#include "stbc/bitmask.hpp"
#include "stbc/constructions.hpp"

namespace stbc {

namespace {

mpz_class binom(long a, long b) {
  if (a < 0 || b < 0 || b > a) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return r;
}

mpq_class frac(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::vector<std::set<int>> column_vars(const DesignMatrix& d, int c) {
  std::vector<std::set<int>> vars(static_cast<std::size_t>(d.p()));
  for (int r = 0; r < d.p(); ++r) {
    for (const auto& [coord, coeff] : d.at(r, c).terms()) {
      vars[static_cast<std::size_t>(r)].insert(coord.var);
    }
  }
  return vars;
}

}  // namespace

mpq_class zero_fraction_counted(const DesignMatrix& design) {
  long zeros = 0;
  for (int r = 0; r < design.p(); ++r) {
    for (int c = 0; c < design.n(); ++c) {
      if (design.at(r, c).is_zero()) ++zeros;
    }
  }
  return frac(zeros, static_cast<long>(design.p()) * design.n());
}

mpq_class zero_fraction_formula(int n, std::uint64_t l) {
  if (n < 1 || n > 62) throw std::invalid_argument("antenna exponent out of range");
  if (l < 1 || l >= (std::uint64_t(1) << n)) {
    throw std::invalid_argument("shift outside the index range");
  }
  const long w = weight(l);
  const long cw = (w + 1) / 2;   // ceil(w/2)
  const long cw1 = (w + 2) / 2;  // ceil((w+1)/2)
  const mpq_class half(1, 2);
  if (n % 2 == 0) {
    const mpq_class den =
        mpq_class((n + 1) * (n + 2)) * mpq_class(binom(n + 2, (n + 2) / 2)) / mpq_class(n + 4);
    const mpz_class a = binom(w, cw1) * binom(n - w + 1, n / 2 - cw) +
                        w * binom(2 * cw - 1, cw) * binom(n - 2 * cw + 2, n / 2 - cw + 2) +
                        (n - w) * binom(2 * cw, cw + 1) * binom(n - 2 * cw + 1, n / 2 - cw);
    return half - frac(1, n + 2) - mpq_class(a) / den;
  }
  if (w == n) return half - frac(1, n + 1);
  const mpq_class den =
      mpq_class(2L * (n + 1) * (n + 1)) * mpq_class(binom(n + 1, (n + 1) / 2)) / mpq_class(n + 3);
  const mpz_class b =
      2 * binom(w, cw1) * binom(n - w, (n + 1) / 2 - cw1 + 1) +
      w * binom(2 * cw, cw) * binom(n - 2 * cw + 1, (n + 1) / 2 - cw + 1) +
      (n - w) * binom(2 * cw, cw + 1) * binom(n - 2 * cw + 1, (n + 1) / 2 - cw);
  return half - frac(1, n + 1) - mpq_class(b) / den;
}

DuplicateCounts duplicate_counts(int n, std::uint64_t l) {
  const auto [m, plan] = pair_rows(n, l);
  DuplicateCounts out;
  long total = 0;
  for (int c = 0; c < m.n(); ++c) {
    const auto vars = column_vars(m, c);
    std::vector<int> refs(static_cast<std::size_t>(m.k()), 0);
    std::vector<char> alone(static_cast<std::size_t>(m.k()), 1);
    for (const auto& cell : vars) {
      for (int v : cell) {
        ++refs[static_cast<std::size_t>(v)];
        if (cell.size() > 1) alone[static_cast<std::size_t>(v)] = 0;
      }
    }
    long count = 0;
    for (int v = 0; v < m.k(); ++v) {
      if (refs[static_cast<std::size_t>(v)] == 2 && alone[static_cast<std::size_t>(v)]) ++count;
    }
    out.per_column.push_back(count);
    total += count;
  }
  out.average = frac(total, m.n());
  return out;
}

Constellation Constellation::qpsk() {
  Constellation c;
  c.name = "qpsk";
  for (int re : {1, -1}) {
    for (int im : {1, -1}) {
      c.points.emplace_back(Sqrt2Rational(re), Sqrt2Rational(im));
    }
  }
  c.mean_energy = Sqrt2Rational(2);
  return c;
}

Constellation Constellation::qam16() {
  Constellation c;
  c.name = "qam16";
  for (int re : {-3, -1, 1, 3}) {
    for (int im : {-3, -1, 1, 3}) {
      c.points.emplace_back(Sqrt2Rational(re), Sqrt2Rational(im));
    }
  }
  c.mean_energy = Sqrt2Rational(10);
  return c;
}

namespace {

struct EntryPowerStats {
  Sqrt2Rational peak;
  Sqrt2Rational mean;
};

// Exact squared-magnitude statistics of one nonzero entry over every symbol
// assignment, on the unnormalized constellation lattice.
EntryPowerStats entry_power_stats(const LinearEntry& e, const Constellation& c) {
  std::set<int> vset;
  for (const auto& [coord, coeff] : e.terms()) vset.insert(coord.var);
  if (vset.size() > 2) throw std::invalid_argument("entry references more than two variables");
  const std::vector<int> vars(vset.begin(), vset.end());
  const std::size_t second = vars.size() == 2 ? c.points.size() : 1;
  EntryPowerStats stats;
  for (std::size_t ai = 0; ai < c.points.size(); ++ai) {
    for (std::size_t bi = 0; bi < second; ++bi) {
      Sqrt2Complex value;
      for (const auto& [coord, coeff] : e.terms()) {
        const Sqrt2Complex& sym = coord.var == vars[0] ? c.points[ai] : c.points[bi];
        const Sqrt2Rational& component = coord.part == Part::I ? sym.re() : sym.im();
        value += coeff * Sqrt2Complex(component, Sqrt2Rational(0));
      }
      const Sqrt2Rational power = value.norm2();
      stats.mean += power;
      if (stats.peak < power) stats.peak = power;
    }
  }
  stats.mean = stats.mean / Sqrt2Rational(static_cast<long>(c.points.size() * second));
  return stats;
}

}  // namespace

std::vector<Sqrt2Rational> papr(const DesignMatrix& design, const Constellation& c,
                                bool include_zero_slots) {
  if (c.points.empty()) throw std::invalid_argument("empty constellation");
  std::vector<Sqrt2Rational> out;
  out.reserve(static_cast<std::size_t>(design.n()));
  for (int col = 0; col < design.n(); ++col) {
    Sqrt2Rational peak(0);
    Sqrt2Rational total(0);
    long active = 0;
    for (int r = 0; r < design.p(); ++r) {
      const LinearEntry& e = design.at(r, col);
      if (e.is_zero()) continue;
      const EntryPowerStats stats = entry_power_stats(e, c);
      total += stats.mean;
      if (peak < stats.peak) peak = stats.peak;
      ++active;
    }
    if (active == 0) throw std::domain_error("all-zero column has no average power");
    const long slots = include_zero_slots ? design.p() : active;
    out.push_back(peak / (total / Sqrt2Rational(slots)));
  }
  return out;
}

Sqrt2Rational peak_instantaneous_energy(const DesignMatrix& design, const Constellation& c) {
  if (c.points.empty()) throw std::invalid_argument("empty constellation");
  Sqrt2Rational peak(0);
  for (int r = 0; r < design.p(); ++r) {
    for (int col = 0; col < design.n(); ++col) {
      const LinearEntry& e = design.at(r, col);
      if (e.is_zero()) continue;
      const Sqrt2Rational entry_peak = entry_power_stats(e, c).peak;
      if (peak < entry_peak) peak = entry_peak;
    }
  }
  return peak;
}

DesignMetrics design_metrics(const DesignMatrix& design, const Constellation* c) {
  DesignMetrics m;
  m.rate = frac(design.k(), design.p());
  m.delay = design.p();
  m.zero_fraction = zero_fraction_counted(design);
  if (c != nullptr) m.per_antenna_papr = papr(design, *c);
  return m;
}

std::vector<Table1Row> table1_rows(int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("bad antenna range");
  std::vector<Table1Row> rows;
  for (int n = n_min; n <= n_max; ++n) {
    for (int w = 1; w <= n; ++w) {
      const std::uint64_t l = (std::uint64_t(1) << w) - 1;
      Table1Row row;
      row.n = n;
      row.w = w;
      row.counted = zero_fraction_counted(pair_rows(n, l).first);
      row.formula = zero_fraction_formula(n, l);
      row.match = row.counted == row.formula;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace stbc
