#pragma once

// Exact linear algebra over the integers and over prime fields.
//
// Everything above this layer (modules, Hom, Ext, complexes) reduces to
// solving congruence systems F x = b (mod m_1, ..., m_r) over a principal
// ideal domain, so the routines here are written once against BaseRing and
// work for both Z and F_p.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace abmc {

using Int = mpz_class;
using Vec = std::vector<Int>;

class AbmcError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

/// Coefficient ring: either Z or F_p with p prime and p < 2^16.
class BaseRing {
 public:
  static BaseRing integers() { return BaseRing(0); }
  static BaseRing prime_field(std::uint32_t p);

  bool is_field() const { return p_ != 0; }
  std::uint32_t characteristic() const { return p_; }
  std::string name() const;

  Int reduce(const Int& a) const;
  /// Representative of a modulo the ideal (m). m = 0 means no reduction
  /// beyond the ring itself.
  Int reduce_mod(const Int& a, const Int& m) const;
  bool is_zero(const Int& a) const { return sgn(reduce(a)) == 0; }
  bool is_unit(const Int& a) const;
  /// Euclidean norm used for pivot selection.
  Int norm(const Int& a) const;
  /// a = q*b + r with norm(r) < norm(b); b nonzero.
  void divmod(const Int& a, const Int& b, Int& q, Int& r) const;
  bool divides(const Int& b, const Int& a) const;
  /// Exact quotient a / b, b | a assumed.
  Int exact_div(const Int& a, const Int& b) const;
  Int inverse(const Int& unit) const;
  /// Canonical associate: |a| over Z, 0 or 1 over a field.
  Int normalize(const Int& a) const;
  /// Unit u with u * a == normalize(a).
  Int normalizing_unit(const Int& a) const;

  bool operator==(const BaseRing& o) const { return p_ == o.p_; }
  bool operator!=(const BaseRing& o) const { return p_ != o.p_; }

 private:
  explicit BaseRing(std::uint32_t p) : p_(p) {}
  std::uint32_t p_;
};

/// Dense row-major matrix of ring scalars. The matrix itself is ring-agnostic;
/// callers reduce through BaseRing where a prime field is in play.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Mat(std::size_t rows, std::size_t cols, std::vector<Int> entries);
  static Mat identity(std::size_t n);
  static Mat from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols = 0);
  static Mat column(const Vec& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Int>& entries() const { return data_; }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;
  void set_col(std::size_t j, const Vec& v);
  Mat transpose() const;
  /// Columns [first, first+count).
  Mat col_range(std::size_t first, std::size_t count) const;
  Mat row_range(std::size_t first, std::size_t count) const;
  Mat select_cols(const std::vector<std::size_t>& idx) const;
  Mat select_rows(const std::vector<std::size_t>& idx) const;
  bool is_zero() const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Vec operator*(const Mat& a, const Vec& v);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  Mat operator-() const;
  Mat scaled(const Int& c) const;
  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

Mat hcat(const Mat& a, const Mat& b);
Mat vcat(const Mat& a, const Mat& b);
Mat block_diag(const Mat& a, const Mat& b);
Mat kron(const Mat& a, const Mat& b);
Mat diagonal(const Vec& d);

/// Reduce every entry through the ring.
Mat reduced(const BaseRing& R, Mat m);
/// Reduce row i modulo moduli[i] (moduli[i] = 0 means plain ring reduction).
Mat reduced_rows(const BaseRing& R, Mat m, const Vec& moduli);
Vec reduced_vec(const BaseRing& R, Vec v, const Vec& moduli);
/// Every row i of m lies in the ideal (moduli[i]).
bool rows_vanish_mod(const BaseRing& R, const Mat& m, const Vec& moduli);

struct SmithForm {
  Mat U, D, V;
  Mat U_inv, V_inv;  // filled only when requested
  std::size_t rank = 0;
  Vec diagonal() const;  // d_1 | d_2 | ... of length min(rows, cols)
};

struct SmithRequest {
  bool U = true;
  bool V = true;
  bool U_inv = false;
  bool V_inv = false;
};

/// U * A * V = D with U, V invertible, D diagonal and d_1 | d_2 | ...
/// Pivots are chosen by smallest norm, ties broken by lowest (row, col), so
/// the output is a deterministic function of the input.
SmithForm smith_normal_form(const BaseRing& R, const Mat& A, SmithRequest want = {});

/// Column echelon form: A * V = E with V invertible and E lower echelon;
/// pivot_rows[c] is the row of the leading entry of column c, and columns
/// from pivot_rows.size() on are zero.
struct ColumnEchelon {
  Mat E, V;
  std::vector<std::size_t> pivot_rows;
  std::size_t rank() const { return pivot_rows.size(); }
};
ColumnEchelon column_echelon(const BaseRing& R, const Mat& A);

/// Basis (as columns) of the null lattice {x : A x = 0}.
Mat kernel_basis(const BaseRing& R, const Mat& A);

/// A x = b over the base ring; absent if no solution exists.
std::optional<Vec> solve_linear(const BaseRing& R, const Mat& A, const Vec& b);

/// Solver for F x = b (mod moduli), moduli given per row (0 = exact).
/// Factorizes once, solves many right-hand sides.
class CongruenceSolver {
 public:
  CongruenceSolver(const BaseRing& R, const Mat& F, const Vec& moduli);
  std::optional<Vec> solve(const Vec& b) const;
  std::size_t unknowns() const { return unknowns_; }

 private:
  BaseRing R_;
  std::size_t unknowns_;
  ColumnEchelon ech_;
};

/// Basis (columns) of the lattice {x : F x = 0 (mod moduli)}.
Mat congruence_kernel(const BaseRing& R, const Mat& F, const Vec& moduli);

/// Canonical form of R^g / span(relation columns): generator orders
/// (nontrivial invariant factors in divisibility order, then 0 for free
/// summands), the quotient map Q : R^g -> canonical and a section S with
/// Q * S = identity modulo the canonical orders.
struct Presentation {
  Vec orders;
  Mat Q;
  Mat S;
};
Presentation present(const BaseRing& R, std::size_t gens, const Mat& relation_cols);

/// Subgroup of the ambient group (+) R/(amb_orders[i]) generated by the
/// columns of G, in canonical form H = R^k / {y : G y = 0 mod amb}.
/// inclusion maps canonical H into the ambient, corestriction maps R^k
/// onto H.
struct SubgroupPresentation {
  Vec orders;
  Mat inclusion;
  Mat corestriction;
};
SubgroupPresentation subgroup_presentation(const BaseRing& R, const Vec& amb_orders, const Mat& G);

/// "0", "Z/2 + Z", "F2^3", ...
std::string abelian_group_string(const BaseRing& R, const Vec& orders);

/// Determinant by fraction-free elimination (square matrices).
Int determinant(const BaseRing& R, const Mat& A);

}  // namespace abmc
