#pragma once

// Finite fields of order q <= 16 and the subspace lattice of F_q^n.
//
// Field elements are the integers 0..q-1. For q = p^m with m > 1 an element
// is the base-p digit string of its polynomial coefficients (constant term
// least significant), reduced modulo a fixed irreducible polynomial:
//
//   q = 4   x^2 + x + 1        over F_2
//   q = 8   x^3 + x + 1        over F_2
//   q = 9   x^2 + 1            over F_3
//   q = 16  x^4 + x + 1        over F_2
//
// A subspace is stored as its reduced row echelon basis, so two subspaces
// are equal exactly when their byte strings are equal.

#include "qekr/numeric.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qekr {

using Element = std::uint8_t;

class FiniteField {
 public:
  int order() const { return q_; }
  int characteristic() const { return p_; }
  int degree() const { return m_; }

  Element add(Element a, Element b) const { return add_[a * q_ + b]; }
  Element sub(Element a, Element b) const { return add_[a * q_ + neg_[b]]; }
  Element mul(Element a, Element b) const { return mul_[a * q_ + b]; }
  Element neg(Element a) const { return neg_[a]; }
  /// Multiplicative inverse; a must be nonzero.
  Element inv(Element a) const { return inv_[a]; }

 private:
  friend FiniteField make_field(int q);
  int q_ = 0;
  int p_ = 0;
  int m_ = 0;
  std::vector<Element> add_;
  std::vector<Element> mul_;
  std::vector<Element> neg_;
  std::vector<Element> inv_;
};

/// Builds F_q; throws Error(Domain) for orders outside the supported set.
FiniteField make_field(int q);
/// Process-wide cached field of order q.
const FiniteField& field_of(int q);

/// Dense row-major matrix over F_q.
struct FieldMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Element> data;

  FieldMatrix() = default;
  FieldMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
  Element& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  Element at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

struct RrefResult {
  int rank = 0;
  /// rank x cols, reduced row echelon form with unit pivots.
  FieldMatrix basis;
};

/// Gauss-Jordan elimination; the row space is preserved.
RrefResult rref(const FiniteField& field, FieldMatrix m);

class Subspace {
 public:
  Subspace() = default;
  /// Canonicalizes the row space of `spanning` (any number of rows).
  Subspace(int q, const FieldMatrix& spanning);
  static Subspace zero(int n, int q);
  static Subspace whole(int n, int q);
  /// Span of the first k standard basis vectors.
  static Subspace coordinate(int n, int k, int q);

  int ambient() const { return n_; }
  int field_order() const { return q_; }
  int dim() const { return dim_; }
  const std::vector<Element>& rows() const { return rows_; }
  Element entry(int r, int c) const { return rows_[static_cast<std::size_t>(r) * n_ + c]; }
  FieldMatrix basis() const;

  /// One hex digit per coordinate, rows separated by ','; "-" for the zero space.
  std::string hex() const;
  static Subspace from_hex(int n, int q, const std::string& text);

  friend bool operator==(const Subspace&, const Subspace&) = default;
  /// Dimension first, then row bytes.
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b);

 private:
  friend class GrassmannianStream;
  int n_ = 0;
  int q_ = 2;
  int dim_ = 0;
  std::vector<Element> rows_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Streams the k-dimensional subspaces of F_q^n: pivot-column sets in
/// lexicographic order, then the free entries as a base-q counter with the
/// earliest free position most significant.
class GrassmannianStream {
 public:
  GrassmannianStream(int n, int k, int q, std::uint64_t cap = kDefaultEnumerationCap);

  std::optional<Subspace> next();
  /// [n choose k]_q.
  std::uint64_t size() const { return size_; }
  int ambient() const { return n_; }
  int layer() const { return k_; }

 private:
  bool advance_pivots();
  void reset_free();

  int n_;
  int k_;
  int q_;
  std::uint64_t size_;
  std::vector<int> pivots_;
  std::vector<std::size_t> free_slots_;  // positions into a k x n row buffer
  std::vector<Element> free_values_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<Subspace> enumerate_grassmannian(int n, int k, int q,
                                             std::uint64_t cap = kDefaultEnumerationCap);
/// All subspaces, dimension ascending, each layer in stream order.
std::vector<Subspace> enumerate_all(int n, int q, std::uint64_t cap = kDefaultEnumerationCap);
std::uint64_t count_all(int n, int q);

int intersection_dim(const Subspace& x, const Subspace& y);
/// True iff y is a subspace of x.
bool contains(const Subspace& x, const Subspace& y);

}  // namespace qekr
