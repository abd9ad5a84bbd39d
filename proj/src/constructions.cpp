// SPDX-License-Identifier: Apache-2.0

#include "stbc/constructions.hpp"

#include <stdexcept>
#include <string>

namespace stbc {

namespace {

constexpr int kMaxMapExponent = 62;
constexpr int kMaxSquareExponent = 10;

void check_exponent(int a) {
  if (a < 1) throw std::invalid_argument("exponent must be positive");
  if (a > kMaxMapExponent) throw std::overflow_error("exponent exceeds index width");
}

int parity_sign(std::uint64_t e) { return (e % 2 == 0) ? +1 : -1; }

}  // namespace

std::optional<CodAtom> square_cod_maps(std::uint64_t i, std::uint64_t j, int a) {
  check_exponent(a);
  const std::uint64_t size = std::uint64_t(1) << a;
  if (i >= size || j >= size) throw std::out_of_range("cell outside the design");
  const std::uint64_t x = i ^ j;
  if (x == 0) {
    // Diagonal: variable 0, conjugated on odd-weight columns.
    return CodAtom{0, +1, parity_sign(static_cast<std::uint64_t>(weight(j)))};
  }
  if ((x & (x - 1)) != 0) return std::nullopt;
  int l = 0;
  while ((std::uint64_t(1) << l) != x) ++l;
  const std::uint64_t bit = x;
  const int conj = ((j >> l) & 1) ? -1 : +1;
  const int sign = parity_sign(static_cast<std::uint64_t>(weight(j & complement_mod(bit, a))));
  return CodAtom{l + 1, sign, conj};
}

DesignMatrix square_cod(int a) {
  check_exponent(a);
  if (a > kMaxSquareExponent) throw std::length_error("square design too large to materialize");
  DesignMatrix g(2, 2, 2);
  g.at(0, 0) = CodAtom{0, +1, +1}.to_entry();
  g.at(0, 1) = CodAtom{1, -1, -1}.to_entry();
  g.at(1, 0) = CodAtom{1, +1, +1}.to_entry();
  g.at(1, 1) = CodAtom{0, +1, -1}.to_entry();
  for (int b = 2; b <= a; ++b) {
    const int half = 1 << (b - 1);
    DesignMatrix next(2 * half, 2 * half, b + 1);
    for (int r = 0; r < half; ++r) {
      for (int c = 0; c < half; ++c) {
        next.at(r, c) = g.at(r, c);
        // Bottom-right block is the conjugate transpose of the previous stage.
        next.at(half + r, half + c) = g.at(c, r).conj();
      }
    }
    for (int d = 0; d < half; ++d) {
      next.at(d, half + d) = CodAtom{b, -1, -1}.to_entry();
      next.at(half + d, d) = CodAtom{b, +1, +1}.to_entry();
    }
    g = std::move(next);
  }
  return g;
}

DesignMatrix build_tilde(int a) {
  const IndexMaps im = build_index_maps(a);
  const int p = static_cast<int>(im.rows());
  const int n = static_cast<int>(im.cols());
  DesignMatrix t(p, n, a + 1);
  const bool swap_repeated = (a % 4 == 1) || (a % 4 == 2);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < n; ++j) {
      auto atom = square_cod_maps(im.f(i), im.g(j), a);
      if (!atom) continue;
      if (swap_repeated && atom->var == 0) atom->conj = -atom->conj;
      t.at(i, j) = atom->to_entry();
    }
  }
  return t;
}

DesignMatrix transpose_to_maximal(const DesignMatrix& tilde) {
  if (!is_conjugation_separated(tilde)) {
    throw std::invalid_argument("rows mix conjugated and plain variables");
  }
  DesignMatrix out(tilde.p(), tilde.k(), tilde.n());
  for (int i = 0; i < tilde.p(); ++i) {
    for (int c = 0; c < tilde.n(); ++c) {
      const auto atom = CodAtom::from_entry(tilde.at(i, c));
      if (!atom) continue;
      if (!out.at(i, atom->var).is_zero()) {
        throw std::invalid_argument("variable repeats within a row");
      }
      out.at(i, atom->var) = CodAtom{c, atom->sign, atom->conj}.to_entry();
    }
  }
  return out;
}

DesignMatrix h_prime(int a) {
  const IndexMaps im = build_index_maps(a);
  const int p = static_cast<int>(im.rows());
  const int k = static_cast<int>(im.cols());
  const int h = (a + 1) / 2;
  DesignMatrix out(p, a + 1, k);
  for (int i = 0; i < p; ++i) {
    const std::uint64_t fi = im.f(i);
    for (int j = 0; j <= a; ++j) {
      const std::uint64_t pos = fi ^ two_plus(j - 1);
      const int lam = im.g_inv(pos);
      if (lam < 0) continue;
      int sign = +1;
      int conj;
      if (j == 0) {
        conj = parity_sign(static_cast<std::uint64_t>(weight(fi) + h));
      } else {
        const std::uint64_t bit = std::uint64_t(1) << (j - 1);
        conj = parity_sign(1 + static_cast<std::uint64_t>(weight(fi & bit)));
        sign = parity_sign(1 + static_cast<std::uint64_t>(weight(fi & complement_mod(bit, a))));
      }
      out.at(i, j) = CodAtom{lam, sign, conj}.to_entry();
    }
  }
  return out;
}

DesignMatrix hat_4m(int m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  const int a = 4 * m - 2;
  const DesignMatrix base = h_prime(a);
  const IndexMaps im = build_index_maps(a);
  DesignMatrix out(base.p(), a + 2, base.k());
  for (int i = 0; i < base.p(); ++i) {
    for (int j = 0; j <= a; ++j) out.at(i, j) = base.at(i, j);
  }
  const std::uint64_t ones = (std::uint64_t(1) << a) - 1;
  std::uint64_t alternating = 0;
  for (int s = 0; s < a; s += 2) alternating |= std::uint64_t(1) << s;
  for (int i = 0; i < base.p(); ++i) {
    const std::uint64_t fi = im.f(i);
    const int lam = im.g_inv(fi ^ ones);
    if (lam < 0) continue;
    const int sign = parity_sign(1 + static_cast<std::uint64_t>(weight(fi & alternating)));
    out.at(i, a + 1) = CodAtom{lam, sign, -1}.to_entry();
  }
  return out;
}

void PairingPlan::validate(int p, int k) const {
  std::vector<int> row_seen(static_cast<std::size_t>(p), 0);
  std::vector<int> var_seen(static_cast<std::size_t>(k), 0);
  auto mark = [](std::vector<int>& seen, int idx, const char* what) {
    if (idx < 0 || idx >= static_cast<int>(seen.size())) {
      throw std::invalid_argument(std::string(what) + " index out of range");
    }
    if (seen[static_cast<std::size_t>(idx)]++) {
      throw std::invalid_argument(std::string(what) + " index repeated");
    }
  };
  for (const auto& [i, j] : row_pairs) {
    if (i >= j) throw std::invalid_argument("row pair not ordered");
    mark(row_seen, i, "row");
    mark(row_seen, j, "row");
  }
  for (int i : unpaired_rows) mark(row_seen, i, "row");
  for (const auto& [u, v] : var_pairs) {
    if (u >= v) throw std::invalid_argument("variable pair not ordered");
    mark(var_seen, u, "variable");
    mark(var_seen, v, "variable");
  }
  for (int u : isolated_vars) mark(var_seen, u, "variable");
  for (int c : row_seen) {
    if (!c) throw std::invalid_argument("row missing from plan");
  }
  for (int c : var_seen) {
    if (!c) throw std::invalid_argument("variable missing from plan");
  }
}

PairingPlan make_pairing_plan(int a, std::uint64_t l) {
  check_exponent(a);
  if (l < 1 || l >= (std::uint64_t(1) << a)) {
    throw std::invalid_argument("shift outside the index range");
  }
  const IndexMaps im = build_index_maps(a);
  PairingPlan plan;
  plan.l = l;
  for (std::size_t i = 0; i < im.rows(); ++i) {
    const std::uint64_t partner = im.f(i) ^ l;
    const int j = im.f_inv(partner);
    if (j < 0) {
      plan.unpaired_rows.push_back(static_cast<int>(i));
    } else if (im.f(i) < partner) {
      plan.row_pairs.emplace_back(static_cast<int>(i), j);
    }
  }
  for (std::size_t u = 0; u < im.cols(); ++u) {
    const std::uint64_t partner = im.g(u) ^ l;
    const int v = im.g_inv(partner);
    if (v < 0) {
      plan.isolated_vars.push_back(static_cast<int>(u));
    } else if (im.g(u) < partner) {
      plan.var_pairs.emplace_back(static_cast<int>(u), v);
    }
  }
  return plan;
}

DesignMatrix apply_row_pairs(const DesignMatrix& d, const PairingPlan& plan) {
  plan.validate(d.p(), d.k());
  const Sqrt2Complex scale(Sqrt2Rational::inv_sqrt2(), Sqrt2Rational(0));
  DesignMatrix out = d;
  for (const auto& [i, j] : plan.row_pairs) {
    for (int c = 0; c < d.n(); ++c) {
      const LinearEntry& top = d.at(i, c);
      const LinearEntry& bottom = d.at(j, c);
      out.at(i, c) = (top + bottom).scaled(scale);
      out.at(j, c) = (top - bottom).scaled(scale);
    }
  }
  return out;
}

std::pair<DesignMatrix, PairingPlan> pair_rows(int a, std::uint64_t l) {
  PairingPlan plan = make_pairing_plan(a, l);
  DesignMatrix m = apply_row_pairs(h_prime(a), plan);
  return {std::move(m), std::move(plan)};
}

DesignMatrix cis_substitute(const DesignMatrix& m, const PairingPlan& plan) {
  plan.validate(m.p(), m.k());
  // partner[v] < 0 marks an isolated variable; lead[v] marks the smaller
  // index of a pair, which takes the (x_u + x_v)/sqrt(2) combination.
  std::vector<int> partner(static_cast<std::size_t>(m.k()), -1);
  std::vector<char> lead(static_cast<std::size_t>(m.k()), 0);
  for (const auto& [u, v] : plan.var_pairs) {
    partner[static_cast<std::size_t>(u)] = v;
    partner[static_cast<std::size_t>(v)] = u;
    lead[static_cast<std::size_t>(u)] = 1;
  }
  const Sqrt2Complex inv_r2(Sqrt2Rational::inv_sqrt2(), Sqrt2Rational(0));
  DesignMatrix out(m.p(), m.n(), m.k());
  for (int r = 0; r < m.p(); ++r) {
    for (int c = 0; c < m.n(); ++c) {
      LinearEntry e;
      for (const auto& [coord, coeff] : m.at(r, c).terms()) {
        const int v = coord.var;
        if (v < 0 || v >= m.k()) throw std::invalid_argument("variable outside the plan");
        const int mate = partner[static_cast<std::size_t>(v)];
        if (mate < 0) {
          e.add_term(coord, coeff);
          continue;
        }
        const Sqrt2Complex half = coeff * inv_r2;
        const int low = lead[static_cast<std::size_t>(v)] ? v : mate;
        const int high = lead[static_cast<std::size_t>(v)] ? mate : v;
        e.add_term(Coord{low, coord.part}, half);
        e.add_term(Coord{high, coord.part}, lead[static_cast<std::size_t>(v)] ? half : -half);
      }
      out.at(r, c) = std::move(e);
    }
  }
  return out;
}

}  // namespace stbc
