// SPDX-License-Identifier: Apache-2.0
//
// Symbolic design matrices over the 2k real symbol coordinates
// {x_0I, x_0Q, ..., x_{k-1}I, x_{k-1}Q} with coefficients in Q(sqrt 2),
// plus the exact Gram verifier and entry classification. One entry
// representation covers plain designs, coordinate-interleaved entries and
// arbitrary linear-processing combinations, so a single verifier decides
// the orthogonality identity G^H G = (sum_i x_iI^2 + x_iQ^2) I for all of
// them.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stbc/sqrt2.hpp"

namespace stbc {

enum class Part : std::uint8_t { I = 0, Q = 1 };

// One real symbol coordinate x_{var,part}.
struct Coord {
  std::int32_t var = 0;
  Part part = Part::I;

  friend bool operator==(const Coord& x, const Coord& y) {
    return x.var == y.var && x.part == y.part;
  }
  friend bool operator<(const Coord& x, const Coord& y) {
    if (x.var != y.var) return x.var < y.var;
    return static_cast<int>(x.part) < static_cast<int>(y.part);
  }
  std::string str() const;
};

// Complex-linear combination of real coordinates. Terms are kept sorted by
// coordinate and never store a zero coefficient.
class LinearEntry {
 public:
  using Term = std::pair<Coord, Sqrt2Complex>;

  LinearEntry() = default;

  // Accumulates coeff onto the coordinate, dropping the term if the sum
  // cancels to zero.
  void add_term(const Coord& c, const Sqrt2Complex& coeff);

  const std::vector<Term>& terms() const { return terms_; }
  Sqrt2Complex coeff(const Coord& c) const;
  bool is_zero() const { return terms_.empty(); }

  LinearEntry operator-() const;
  LinearEntry conj() const;  // coordinates are real, so only coefficients flip
  LinearEntry scaled(const Sqrt2Complex& s) const;
  LinearEntry& operator+=(const LinearEntry& o);
  friend LinearEntry operator+(LinearEntry x, const LinearEntry& y) { return x += y; }
  friend LinearEntry operator-(LinearEntry x, const LinearEntry& y) {
    return x += -y;
  }

  friend bool operator==(const LinearEntry& x, const LinearEntry& y) {
    return x.terms_ == y.terms_;
  }
  friend bool operator!=(const LinearEntry& x, const LinearEntry& y) {
    return !(x == y);
  }

  std::string str() const;

 private:
  std::vector<Term> terms_;
};

// Single-variable entry s * mu * x_var (tau = +1) or s * mu * conj(x_var)
// (tau = -1), the (lambda, mu, tau) description the square-design maps
// produce. Scale s is 1 for plain design atoms and 1/sqrt(2) for entries
// that went through a row-pairing step.
struct CodAtom {
  int var = 0;
  int sign = +1;   // mu
  int conj = +1;   // tau: +1 plain, -1 conjugated
  Sqrt2Rational scale = Sqrt2Rational(1);

  LinearEntry to_entry() const;
  // The inverse lens; empty when the entry is not a (possibly scaled)
  // single-variable atom with scale 1 or 1/sqrt(2).
  static std::optional<CodAtom> from_entry(const LinearEntry& e);
};

// p x n grid of entries in k complex variables; p time slots, n antennas.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  DesignMatrix(int p, int n, int k);

  int p() const { return p_; }
  int n() const { return n_; }
  int k() const { return k_; }

  LinearEntry& at(int row, int col);
  const LinearEntry& at(int row, int col) const;

  // True when every referenced variable index lies below k.
  bool vars_in_range() const;

  friend bool operator==(const DesignMatrix& x, const DesignMatrix& y) {
    return x.p_ == y.p_ && x.n_ == y.n_ && x.k_ == y.k_ && x.cells_ == y.cells_;
  }
  friend bool operator!=(const DesignMatrix& x, const DesignMatrix& y) {
    return !(x == y);
  }

 private:
  int p_ = 0, n_ = 0, k_ = 0;
  std::vector<LinearEntry> cells_;
};

// Quadratic form in the real coordinates: sum of coeff * z_c1 * z_c2 over
// unordered coordinate pairs.
class QuadraticForm {
 public:
  // Accumulates the product of two linear entries into the form.
  void add_product(const LinearEntry& x, const LinearEntry& y);
  void add_monomial(const Coord& c1, const Coord& c2, const Sqrt2Complex& coeff);

  Sqrt2Complex coeff(const Coord& c1, const Coord& c2) const;
  bool is_zero() const { return coeffs_.empty(); }
  QuadraticForm conj() const;

  // sum_{i<k} x_iI^2 + x_iQ^2, the right-hand side of the orthogonality
  // identity.
  static QuadraticForm sum_of_squares(int k);

  friend bool operator==(const QuadraticForm& x, const QuadraticForm& y) {
    return x.coeffs_ == y.coeffs_;
  }
  friend bool operator!=(const QuadraticForm& x, const QuadraticForm& y) {
    return !(x == y);
  }

  std::string str() const;

 private:
  std::map<std::pair<Coord, Coord>, Sqrt2Complex> coeffs_;
};

// Exact Gram matrix: entry (u, v) = sum_r conj(E(r,u)) * E(r,v).
class Gram {
 public:
  explicit Gram(int n) : n_(n), forms_(static_cast<std::size_t>(n) * n) {}
  QuadraticForm& at(int u, int v);
  const QuadraticForm& at(int u, int v) const;
  int n() const { return n_; }

 private:
  int n_ = 0;
  std::vector<QuadraticForm> forms_;
};

Gram gram(const DesignMatrix& design);

// The linear-processing orthogonality identity, decided symbolically.
bool is_orthogonal(const DesignMatrix& design);

enum class DesignClass { COD, CIS_COD, LCOD, NOT_ORTHOGONAL };

std::string to_string(DesignClass c);

// COD: orthogonal with every nonzero entry a scale-1 atom. CIS_COD:
// orthogonal with every nonzero entry an atom or a coordinate-interleaved
// pair, scaled by +-1 or +-1/sqrt(2). LCOD: any other orthogonal design.
DesignClass classify(const DesignMatrix& design);

// True when the entry has exactly two terms, the I part of one variable
// with coefficient +-s and the Q part of another with coefficient -+js,
// s in {1, 1/sqrt(2)}: a coordinate-interleaved variable or its conjugate.
bool is_coordinate_interleaved(const LinearEntry& e);

// Outcome of the proper-2x2 characterization check. On failure the four
// indices name the offending rows and columns (duplicated when the
// violation involves a single row or column).
struct CodCheck {
  bool ok = true;
  int row1 = -1, row2 = -1, col1 = -1, col2 = -1;
  std::string reason;
};

// Executable characterization of CODs among atom-entry designs:
//   (i) each variable exactly once per column, at most once per row;
//  (ii) three nonzero corners on matching variables force the fourth;
// (iii) every proper 2x2 submatrix (fully nonzero, exactly two distinct
//       variables) is itself a COD.
// Equivalent to is_orthogonal on such designs. Throws when an entry is not
// a scale-1 atom.
CodCheck check_cod_characterization(const DesignMatrix& design);

// True when within each row all nonzero atoms share one conjugation state.
// Throws on non-atom entries.
bool is_conjugation_separated(const DesignMatrix& design);

}  // namespace stbc
