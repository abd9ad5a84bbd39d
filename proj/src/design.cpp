// SPDX-License-Identifier: Apache-2.0

#include "stbc/design.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace stbc {

std::string Coord::str() const {
  return "x" + std::to_string(var) + (part == Part::I ? "I" : "Q");
}

void LinearEntry::add_term(const Coord& c, const Sqrt2Complex& coeff) {
  if (coeff.is_zero()) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), c,
      [](const Term& t, const Coord& key) { return t.first < key; });
  if (it != terms_.end() && it->first == c) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, Term{c, coeff});
  }
}

Sqrt2Complex LinearEntry::coeff(const Coord& c) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), c,
      [](const Term& t, const Coord& key) { return t.first < key; });
  if (it != terms_.end() && it->first == c) return it->second;
  return Sqrt2Complex(0);
}

LinearEntry LinearEntry::operator-() const {
  LinearEntry r;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.emplace_back(t.first, -t.second);
  return r;
}

LinearEntry LinearEntry::conj() const {
  LinearEntry r;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.emplace_back(t.first, t.second.conj());
  return r;
}

LinearEntry LinearEntry::scaled(const Sqrt2Complex& s) const {
  LinearEntry r;
  if (s.is_zero()) return r;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.emplace_back(t.first, t.second * s);
  return r;
}

LinearEntry& LinearEntry::operator+=(const LinearEntry& o) {
  for (const Term& t : o.terms_) add_term(t.first, t.second);
  return *this;
}

std::string LinearEntry::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) os << " + ";
    os << "(" << t.second.str() << ")*" << t.first.str();
    first = false;
  }
  return os.str();
}

LinearEntry CodAtom::to_entry() const {
  LinearEntry e;
  Sqrt2Complex c(scale * Sqrt2Rational(sign), Sqrt2Rational(0));
  e.add_term(Coord{var, Part::I}, c);
  // x = x_I + j x_Q, conj(x) = x_I - j x_Q
  e.add_term(Coord{var, Part::Q}, conj > 0 ? c.times_j() : -c.times_j());
  return e;
}

std::optional<CodAtom> CodAtom::from_entry(const LinearEntry& e) {
  const auto& ts = e.terms();
  if (ts.size() != 2) return std::nullopt;
  const auto& [ci, cI] = ts[0];
  const auto& [cq, cQ] = ts[1];
  if (ci.var != cq.var || ci.part != Part::I || cq.part != Part::Q)
    return std::nullopt;
  if (!cI.is_real() || !cQ.is_imaginary()) return std::nullopt;
  CodAtom atom;
  atom.var = ci.var;
  if (cQ.im() == cI.re())
    atom.conj = +1;
  else if (cQ.im() == -cI.re())
    atom.conj = -1;
  else
    return std::nullopt;
  atom.sign = cI.re().sign();
  atom.scale = atom.sign < 0 ? -cI.re() : cI.re();
  if (atom.scale != Sqrt2Rational(1) && atom.scale != Sqrt2Rational::inv_sqrt2())
    return std::nullopt;
  return atom;
}

DesignMatrix::DesignMatrix(int p, int n, int k) : p_(p), n_(n), k_(k) {
  if (p < 1 || n < 1 || k < 1)
    throw std::invalid_argument("DesignMatrix: dimensions must be positive");
  cells_.assign(static_cast<std::size_t>(p) * n, LinearEntry{});
}

LinearEntry& DesignMatrix::at(int row, int col) {
  if (row < 0 || row >= p_ || col < 0 || col >= n_)
    throw std::out_of_range("DesignMatrix::at");
  return cells_[static_cast<std::size_t>(row) * n_ + col];
}

const LinearEntry& DesignMatrix::at(int row, int col) const {
  return const_cast<DesignMatrix*>(this)->at(row, col);
}

bool DesignMatrix::vars_in_range() const {
  for (const LinearEntry& e : cells_)
    for (const auto& t : e.terms())
      if (t.first.var < 0 || t.first.var >= k_) return false;
  return true;
}

void QuadraticForm::add_monomial(const Coord& c1, const Coord& c2,
                                 const Sqrt2Complex& coeff) {
  if (coeff.is_zero()) return;
  auto key = c2 < c1 ? std::pair{c2, c1} : std::pair{c1, c2};
  auto [it, inserted] = coeffs_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

void QuadraticForm::add_product(const LinearEntry& x, const LinearEntry& y) {
  for (const auto& [c1, a1] : x.terms())
    for (const auto& [c2, a2] : y.terms()) add_monomial(c1, c2, a1 * a2);
}

Sqrt2Complex QuadraticForm::coeff(const Coord& c1, const Coord& c2) const {
  auto key = c2 < c1 ? std::pair{c2, c1} : std::pair{c1, c2};
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? Sqrt2Complex(0) : it->second;
}

QuadraticForm QuadraticForm::conj() const {
  QuadraticForm r;
  for (const auto& [key, c] : coeffs_) r.coeffs_.emplace(key, c.conj());
  return r;
}

QuadraticForm QuadraticForm::sum_of_squares(int k) {
  QuadraticForm r;
  for (int i = 0; i < k; ++i) {
    r.add_monomial(Coord{i, Part::I}, Coord{i, Part::I}, Sqrt2Complex(1));
    r.add_monomial(Coord{i, Part::Q}, Coord{i, Part::Q}, Sqrt2Complex(1));
  }
  return r;
}

std::string QuadraticForm::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : coeffs_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")*" << key.first.str() << "*" << key.second.str();
    first = false;
  }
  return os.str();
}

QuadraticForm& Gram::at(int u, int v) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) throw std::out_of_range("Gram::at");
  return forms_[static_cast<std::size_t>(u) * n_ + v];
}

const QuadraticForm& Gram::at(int u, int v) const {
  return const_cast<Gram*>(this)->at(u, v);
}

Gram gram(const DesignMatrix& design) {
  Gram g(design.n());
  for (int u = 0; u < design.n(); ++u)
    for (int v = 0; v < design.n(); ++v)
      for (int r = 0; r < design.p(); ++r)
        g.at(u, v).add_product(design.at(r, u).conj(), design.at(r, v));
  return g;
}

bool is_orthogonal(const DesignMatrix& design) {
  if (!design.vars_in_range()) return false;
  Gram g = gram(design);
  QuadraticForm expected = QuadraticForm::sum_of_squares(design.k());
  for (int u = 0; u < design.n(); ++u)
    for (int v = 0; v < design.n(); ++v) {
      if (u == v && g.at(u, v) != expected) return false;
      if (u != v && !g.at(u, v).is_zero()) return false;
    }
  return true;
}

std::string to_string(DesignClass c) {
  switch (c) {
    case DesignClass::COD: return "COD";
    case DesignClass::CIS_COD: return "CIS-COD";
    case DesignClass::LCOD: return "LCOD";
    case DesignClass::NOT_ORTHOGONAL: return "not orthogonal";
  }
  return "?";
}

bool is_coordinate_interleaved(const LinearEntry& e) {
  const auto& ts = e.terms();
  if (ts.size() != 2) return false;
  const LinearEntry::Term* ti = nullptr;
  const LinearEntry::Term* tq = nullptr;
  for (const auto& t : ts) (t.first.part == Part::I ? ti : tq) = &t;
  if (ti == nullptr || tq == nullptr) return false;
  if (ti->first.var == tq->first.var) return false;  // that is an atom
  const Sqrt2Complex& a = ti->second;
  const Sqrt2Complex& b = tq->second;
  if (!a.is_real() || !b.is_imaginary()) return false;
  Sqrt2Rational sa = a.re().sign() < 0 ? -a.re() : a.re();
  Sqrt2Rational sb = b.im().sign() < 0 ? -b.im() : b.im();
  if (sa != sb) return false;
  return sa == Sqrt2Rational(1) || sa == Sqrt2Rational::inv_sqrt2();
}

DesignClass classify(const DesignMatrix& design) {
  if (!is_orthogonal(design)) return DesignClass::NOT_ORTHOGONAL;
  bool cod = true, cis = true;
  for (int r = 0; r < design.p() && cis; ++r)
    for (int c = 0; c < design.n() && cis; ++c) {
      const LinearEntry& e = design.at(r, c);
      if (e.is_zero()) continue;
      auto atom = CodAtom::from_entry(e);
      if (atom && atom->scale == Sqrt2Rational(1)) continue;
      cod = false;
      if (atom) continue;  // scaled atom still fits the CIS shape
      if (!is_coordinate_interleaved(e)) cis = false;
    }
  if (cod) return DesignClass::COD;
  if (cis) return DesignClass::CIS_COD;
  return DesignClass::LCOD;
}

namespace {

// Dense atom view of an atom-entry design; throws unless every nonzero
// entry is a plain +-x / +-x* atom.
std::vector<std::optional<CodAtom>> atom_grid(const DesignMatrix& d,
                                              bool require_unit_scale) {
  std::vector<std::optional<CodAtom>> grid(static_cast<std::size_t>(d.p()) * d.n());
  for (int r = 0; r < d.p(); ++r)
    for (int c = 0; c < d.n(); ++c) {
      const LinearEntry& e = d.at(r, c);
      if (e.is_zero()) continue;
      auto atom = CodAtom::from_entry(e);
      if (!atom)
        throw std::invalid_argument("entry (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") is not a single atom");
      if (require_unit_scale && atom->scale != Sqrt2Rational(1))
        throw std::invalid_argument("entry (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") carries a scale");
      grid[static_cast<std::size_t>(r) * d.n() + c] = *atom;
    }
  return grid;
}

}  // namespace

CodCheck check_cod_characterization(const DesignMatrix& design) {
  const int p = design.p(), n = design.n(), k = design.k();
  auto grid = atom_grid(design, /*require_unit_scale=*/true);
  auto at = [&](int r, int c) -> const std::optional<CodAtom>& {
    return grid[static_cast<std::size_t>(r) * n + c];
  };

  // (i) every variable exactly once per column...
  std::vector<std::vector<int>> row_of(k, std::vector<int>(n, -1));
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < p; ++r) {
      if (!at(r, c)) continue;
      int v = at(r, c)->var;
      if (row_of[v][c] >= 0)
        return CodCheck{false, row_of[v][c], r, c, c,
                        "variable x" + std::to_string(v) + " twice in column"};
      row_of[v][c] = r;
    }
  for (int c = 0; c < n; ++c)
    for (int v = 0; v < k; ++v)
      if (row_of[v][c] < 0)
        return CodCheck{false, -1, -1, c, c,
                        "variable x" + std::to_string(v) + " missing from column"};
  // ... and at most once per row.
  for (int r = 0; r < p; ++r) {
    std::vector<int> col_of(k, -1);
    for (int c = 0; c < n; ++c) {
      if (!at(r, c)) continue;
      int v = at(r, c)->var;
      if (col_of[v] >= 0)
        return CodCheck{false, r, r, col_of[v], c,
                        "variable x" + std::to_string(v) + " twice in row"};
      col_of[v] = c;
    }
  }

  // (ii) three corners on one variable force the fourth corner.
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < n; ++c) {
      if (!at(r, c)) continue;
      int v = at(r, c)->var;
      for (int c2 = 0; c2 < n; ++c2) {
        if (c2 == c || !at(r, c2)) continue;
        int r2 = row_of[v][c2];  // the other occurrence of v
        if (r2 == r) continue;
        if (!at(r2, c))
          return CodCheck{false, r, r2, c, c2, "missing fourth corner"};
        if (at(r, c2)->var != at(r2, c)->var)
          return CodCheck{false, r, r2, c, c2, "corner variables differ"};
      }
    }

  // (iii) proper 2x2 submatrices are CODs in their own right.
  for (int r1 = 0; r1 < p; ++r1)
    for (int r2 = r1 + 1; r2 < p; ++r2)
      for (int c1 = 0; c1 < n; ++c1)
        for (int c2 = c1 + 1; c2 < n; ++c2) {
          const auto &a = at(r1, c1), &b = at(r1, c2), &c = at(r2, c1),
                     &d = at(r2, c2);
          if (!a || !b || !c || !d) continue;
          int v0 = a->var;
          int v1 = -1;
          bool proper = true;
          for (const auto* atom : {&b, &c, &d}) {
            int v = (*atom)->var;
            if (v == v0) continue;
            if (v1 < 0)
              v1 = v;
            else if (v != v1)
              proper = false;
          }
          if (!proper || v1 < 0) continue;  // needs exactly two distinct vars
          DesignMatrix sub(2, 2, 2);
          auto remap = [&](const CodAtom& atom) {
            CodAtom m = atom;
            m.var = atom.var == v0 ? 0 : 1;
            return m.to_entry();
          };
          sub.at(0, 0) = remap(*a);
          sub.at(0, 1) = remap(*b);
          sub.at(1, 0) = remap(*c);
          sub.at(1, 1) = remap(*d);
          if (!is_orthogonal(sub))
            return CodCheck{false, r1, r2, c1, c2, "improper 2x2 submatrix"};
        }

  return CodCheck{};
}

bool is_conjugation_separated(const DesignMatrix& design) {
  auto grid = atom_grid(design, /*require_unit_scale=*/false);
  for (int r = 0; r < design.p(); ++r) {
    int seen = 0;
    for (int c = 0; c < design.n(); ++c) {
      const auto& atom = grid[static_cast<std::size_t>(r) * design.n() + c];
      if (!atom) continue;
      if (seen == 0)
        seen = atom->conj;
      else if (seen != atom->conj)
        return false;
    }
  }
  return true;
}

}  // namespace stbc
