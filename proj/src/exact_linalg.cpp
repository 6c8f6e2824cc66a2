#include "abmc/exact_linalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace abmc {

// ---------------------------------------------------------------- BaseRing

BaseRing BaseRing::prime_field(std::uint32_t p) {
  if (p < 2 || p >= (1u << 16)) {
    throw AbmcError("prime field characteristic must satisfy 2 <= p < 65536, got " +
                    std::to_string(p));
  }
  for (std::uint32_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) throw AbmcError("characteristic " + std::to_string(p) + " is not prime");
  }
  return BaseRing(p);
}

std::string BaseRing::name() const { return p_ == 0 ? "Z" : "F" + std::to_string(p_); }

Int BaseRing::reduce(const Int& a) const {
  if (p_ == 0) return a;
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), p_);
  return r;
}

Int BaseRing::reduce_mod(const Int& a, const Int& m) const {
  if (p_ != 0) return is_zero(m) ? reduce(a) : Int(0);
  if (sgn(m) == 0) return a;
  Int r;
  Int am = abs(m);
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), am.get_mpz_t());
  return r;
}

bool BaseRing::is_unit(const Int& a) const {
  if (p_ != 0) return !is_zero(a);
  return a == 1 || a == -1;
}

Int BaseRing::norm(const Int& a) const {
  if (p_ != 0) return is_zero(a) ? Int(0) : Int(1);
  return abs(a);
}

void BaseRing::divmod(const Int& a, const Int& b, Int& q, Int& r) const {
  if (p_ != 0) {
    q = reduce(a * inverse(b));
    r = 0;
    return;
  }
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

bool BaseRing::divides(const Int& b, const Int& a) const {
  if (p_ != 0) return !is_zero(b) || is_zero(a);
  if (sgn(b) == 0) return sgn(a) == 0;
  return mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0;
}

Int BaseRing::exact_div(const Int& a, const Int& b) const {
  if (p_ != 0) return reduce(a * inverse(b));
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int BaseRing::inverse(const Int& unit) const {
  if (p_ == 0) {
    if (unit == 1 || unit == -1) return unit;
    throw AbmcError("integer " + unit.get_str() + " is not invertible");
  }
  Int u = reduce(unit);
  if (sgn(u) == 0) throw AbmcError("zero is not invertible in " + name());
  Int inv;
  Int p(p_);
  mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t());
  return inv;
}

Int BaseRing::normalize(const Int& a) const {
  if (p_ != 0) return is_zero(a) ? Int(0) : Int(1);
  return abs(a);
}

Int BaseRing::normalizing_unit(const Int& a) const {
  if (p_ != 0) return is_zero(a) ? Int(1) : inverse(a);
  return sgn(a) < 0 ? Int(-1) : Int(1);
}

// --------------------------------------------------------------------- Mat

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("matrix entry count does not match " + std::to_string(rows) + "x" +
                            std::to_string(cols));
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  std::size_t c = rows.empty() ? cols : rows.front().size();
  Mat m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Mat Mat::column(const Vec& v) { return Mat(v.size(), 1, v); }

Vec Mat::col(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec Mat::row(std::size_t i) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void Mat::set_col(std::size_t j, const Vec& v) {
  if (v.size() != rows_) throw DimensionMismatch("column length mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::col_range(std::size_t first, std::size_t count) const {
  Mat m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
  return m;
}

Mat Mat::row_range(std::size_t first, std::size_t count) const {
  Mat m(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(first + i, j);
  return m;
}

Mat Mat::select_cols(const std::vector<std::size_t>& idx) const {
  Mat m(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

Mat Mat::select_rows(const std::vector<std::size_t>& idx) const {
  Mat m(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
  return m;
}

bool Mat::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return sgn(x) == 0; });
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionMismatch("cannot multiply " + std::to_string(a.rows_) + "x" +
                            std::to_string(a.cols_) + " by " + std::to_string(b.rows_) + "x" +
                            std::to_string(b.cols_));
  }
  Mat c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Int& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Int& bkj = b(k, j);
        if (sgn(bkj) != 0) c(i, j) += aik * bkj;
      }
    }
  }
  return c;
}

Vec operator*(const Mat& a, const Vec& v) {
  if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector size mismatch");
  Vec r(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      if (sgn(v[k]) != 0) r[i] += a(i, k) * v[k];
  return r;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference shape mismatch");
  Mat c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

Mat Mat::operator-() const {
  Mat c = *this;
  for (auto& x : c.data_) x = -x;
  return c;
}

Mat Mat::scaled(const Int& s) const {
  Mat c = *this;
  for (auto& x : c.data_) x *= s;
  return c;
}

bool Mat::operator==(const Mat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::string Mat::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

Mat hcat(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("hcat row mismatch");
  Mat m(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
  }
  return m;
}

Mat vcat(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("vcat column mismatch");
  Mat m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
  return m;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return m;
}

Mat diagonal(const Vec& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat reduced(const BaseRing& R, Mat m) {
  if (!R.is_field()) return m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = R.reduce(m(i, j));
  return m;
}

Mat reduced_rows(const BaseRing& R, Mat m, const Vec& moduli) {
  if (moduli.size() != m.rows()) throw DimensionMismatch("moduli length does not match rows");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = R.reduce_mod(m(i, j), moduli[i]);
  return m;
}

Vec reduced_vec(const BaseRing& R, Vec v, const Vec& moduli) {
  if (moduli.size() != v.size()) throw DimensionMismatch("moduli length does not match vector");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = R.reduce_mod(v[i], moduli[i]);
  return v;
}

bool rows_vanish_mod(const BaseRing& R, const Mat& m, const Vec& moduli) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(R.reduce_mod(m(i, j), moduli[i])) != 0) return false;
  return true;
}

// ---------------------------------------------------------- Smith form

namespace {

// Elementary operations that keep the transform matrices in sync.
struct SmithWork {
  const BaseRing& R;
  Mat A, U, V, Ui, Vi;
  SmithRequest want;

  void reduce_row(Mat& m, std::size_t i) {
    if (!R.is_field()) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = R.reduce(m(i, j));
  }
  void reduce_col(Mat& m, std::size_t j) {
    if (!R.is_field()) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = R.reduce(m(i, j));
  }
  static void row_axpy(Mat& m, std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m(src, j)) != 0) m(dst, j) += c * m(src, j);
  }
  static void col_axpy(Mat& m, std::size_t dst, std::size_t src, const Int& c) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (sgn(m(i, src)) != 0) m(i, dst) += c * m(i, src);
  }
  static void swap_rows(Mat& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
  }
  static void swap_cols(Mat& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
  }

  // row_dst += c * row_src
  void row_add(std::size_t dst, std::size_t src, const Int& c) {
    row_axpy(A, dst, src, c);
    reduce_row(A, dst);
    if (want.U) { row_axpy(U, dst, src, c); reduce_row(U, dst); }
    if (want.U_inv) { col_axpy(Ui, src, dst, -c); reduce_col(Ui, src); }
  }
  // col_dst += c * col_src
  void col_add(std::size_t dst, std::size_t src, const Int& c) {
    col_axpy(A, dst, src, c);
    reduce_col(A, dst);
    if (want.V) { col_axpy(V, dst, src, c); reduce_col(V, dst); }
    if (want.V_inv) { row_axpy(Vi, src, dst, -c); reduce_row(Vi, src); }
  }
  void row_swap(std::size_t a, std::size_t b) {
    if (a == b) return;
    swap_rows(A, a, b);
    if (want.U) swap_rows(U, a, b);
    if (want.U_inv) swap_cols(Ui, a, b);
  }
  void col_swap(std::size_t a, std::size_t b) {
    if (a == b) return;
    swap_cols(A, a, b);
    if (want.V) swap_cols(V, a, b);
    if (want.V_inv) swap_rows(Vi, a, b);
  }
  void row_scale(std::size_t i, const Int& u) {
    if (u == 1) return;
    Int ui = R.inverse(u);
    for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = R.reduce(A(i, j) * u);
    if (want.U)
      for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) = R.reduce(U(i, j) * u);
    if (want.U_inv)
      for (std::size_t k = 0; k < Ui.rows(); ++k) Ui(k, i) = R.reduce(Ui(k, i) * ui);
  }
};

}  // namespace

Vec SmithForm::diagonal() const {
  std::size_t n = std::min(D.rows(), D.cols());
  Vec d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = D(i, i);
  return d;
}

SmithForm smith_normal_form(const BaseRing& R, const Mat& A, SmithRequest want) {
  const std::size_t m = A.rows(), n = A.cols();
  SmithWork w{R, reduced(R, A), Mat::identity(m), Mat::identity(n), Mat::identity(m),
              Mat::identity(n), want};
  if (!want.U) w.U = Mat();
  if (!want.V) w.V = Mat();
  if (!want.U_inv) w.Ui = Mat();
  if (!want.V_inv) w.Vi = Mat();

  std::size_t t = 0;
  const std::size_t lim = std::min(m, n);
  while (t < lim) {
    // Global pivot: smallest norm, ties by lowest (row, col).
    bool found = false;
    std::size_t pr = 0, pc = 0;
    Int best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (sgn(w.A(i, j)) == 0) continue;
        Int nv = R.norm(w.A(i, j));
        if (!found || nv < best) {
          found = true;
          best = nv;
          pr = i;
          pc = j;
        }
      }
    if (!found) break;
    w.row_swap(t, pr);
    w.col_swap(t, pc);

    for (;;) {
      bool clean = true;
      Int q, r;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(w.A(i, t)) == 0) continue;
        R.divmod(w.A(i, t), w.A(t, t), q, r);
        w.row_add(i, t, -q);
        if (sgn(w.A(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(w.A(t, j)) == 0) continue;
        R.divmod(w.A(t, j), w.A(t, t), q, r);
        w.col_add(j, t, -q);
        if (sgn(w.A(t, j)) != 0) clean = false;
      }
      if (!clean) {
        // Move the smallest leftover in row/column t onto the diagonal.
        std::size_t bi = t, bj = t;
        Int bn = R.norm(w.A(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(w.A(i, t)) != 0 && R.norm(w.A(i, t)) < bn) { bn = R.norm(w.A(i, t)); bi = i; bj = t; }
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(w.A(t, j)) != 0 && R.norm(w.A(t, j)) < bn) { bn = R.norm(w.A(t, j)); bi = t; bj = j; }
        w.row_swap(t, bi);
        w.col_swap(t, bj);
        continue;
      }
      // Divisibility of the remaining block by the pivot.
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!R.divides(w.A(t, t), w.A(i, j))) {
            w.row_add(t, i, Int(1));
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    w.row_scale(t, R.normalizing_unit(w.A(t, t)));
    ++t;
  }

  SmithForm out;
  out.D = std::move(w.A);
  out.U = std::move(w.U);
  out.V = std::move(w.V);
  out.U_inv = std::move(w.Ui);
  out.V_inv = std::move(w.Vi);
  out.rank = t;
  return out;
}

// ------------------------------------------------------- column echelon

ColumnEchelon column_echelon(const BaseRing& R, const Mat& A) {
  const std::size_t m = A.rows(), n = A.cols();
  ColumnEchelon ce;
  ce.E = reduced(R, A);
  ce.V = Mat::identity(n);
  Mat& E = ce.E;
  Mat& V = ce.V;

  auto combine = [&](std::size_t c, std::size_t j, const Int& s, const Int& t, const Int& u,
                     const Int& v) {
    // (col_c, col_j) <- (s col_c + t col_j, u col_c + v col_j)
    auto apply = [&](Mat& M) {
      for (std::size_t i = 0; i < M.rows(); ++i) {
        Int a = M(i, c), b = M(i, j);
        if (sgn(a) == 0 && sgn(b) == 0) continue;
        M(i, c) = R.reduce(s * a + t * b);
        M(i, j) = R.reduce(u * a + v * b);
      }
    };
    apply(E);
    apply(V);
  };

  std::size_t c = 0;
  for (std::size_t i = 0; i < m && c < n; ++i) {
    if (R.is_field()) {
      std::size_t j0 = n;
      for (std::size_t j = c; j < n; ++j)
        if (sgn(E(i, j)) != 0) { j0 = j; break; }
      if (j0 == n) continue;
      if (j0 != c) {
        for (std::size_t r = 0; r < m; ++r) std::swap(E(r, c), E(r, j0));
        for (std::size_t r = 0; r < n; ++r) std::swap(V(r, c), V(r, j0));
      }
      Int inv = R.inverse(E(i, c));
      if (inv != 1) {
        for (std::size_t r = 0; r < m; ++r) E(r, c) = R.reduce(E(r, c) * inv);
        for (std::size_t r = 0; r < n; ++r) V(r, c) = R.reduce(V(r, c) * inv);
      }
      for (std::size_t j = c + 1; j < n; ++j) {
        if (sgn(E(i, j)) == 0) continue;
        Int f = E(i, j);
        for (std::size_t r = 0; r < m; ++r)
          if (sgn(E(r, c)) != 0) E(r, j) = R.reduce(E(r, j) - f * E(r, c));
        for (std::size_t r = 0; r < n; ++r)
          if (sgn(V(r, c)) != 0) V(r, j) = R.reduce(V(r, j) - f * V(r, c));
      }
    } else {
      // Bring the smallest entry of row i to column c, then gcd-combine.
      std::size_t j0 = n;
      Int best;
      for (std::size_t j = c; j < n; ++j)
        if (sgn(E(i, j)) != 0 && (j0 == n || abs(E(i, j)) < best)) { j0 = j; best = abs(E(i, j)); }
      if (j0 == n) continue;
      if (j0 != c) {
        for (std::size_t r = 0; r < m; ++r) std::swap(E(r, c), E(r, j0));
        for (std::size_t r = 0; r < n; ++r) std::swap(V(r, c), V(r, j0));
      }
      for (std::size_t j = c + 1; j < n; ++j) {
        if (sgn(E(i, j)) == 0) continue;
        Int a = E(i, c), b = E(i, j);
        if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
          Int q = b / a;
          for (std::size_t r = 0; r < m; ++r)
            if (sgn(E(r, c)) != 0) E(r, j) -= q * E(r, c);
          for (std::size_t r = 0; r < n; ++r)
            if (sgn(V(r, c)) != 0) V(r, j) -= q * V(r, c);
          continue;
        }
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Int u = -b / g, v = a / g;
        combine(c, j, s, t, u, v);
      }
      if (sgn(E(i, c)) < 0) {
        for (std::size_t r = 0; r < m; ++r) E(r, c) = -E(r, c);
        for (std::size_t r = 0; r < n; ++r) V(r, c) = -V(r, c);
      }
    }
    ce.pivot_rows.push_back(i);
    ++c;
  }
  return ce;
}

Mat kernel_basis(const BaseRing& R, const Mat& A) {
  ColumnEchelon ce = column_echelon(R, A);
  return ce.V.col_range(ce.rank(), A.cols() - ce.rank());
}

namespace {

// Forward substitution on a column echelon form: E z = b.
std::optional<Vec> echelon_solve(const BaseRing& R, const ColumnEchelon& ce, const Vec& b) {
  const Mat& E = ce.E;
  Vec z(E.cols());
  std::size_t c = 0;
  for (std::size_t i = 0; i < E.rows(); ++i) {
    Int s = b[i];
    for (std::size_t k = 0; k < c; ++k)
      if (sgn(E(i, k)) != 0) s -= E(i, k) * z[k];
    s = R.reduce(s);
    if (c < ce.rank() && ce.pivot_rows[c] == i) {
      if (!R.divides(E(i, c), s)) return std::nullopt;
      z[c] = R.exact_div(s, E(i, c));
      ++c;
    } else if (sgn(s) != 0) {
      return std::nullopt;
    }
  }
  Vec x = ce.V * z;
  for (auto& e : x) e = R.reduce(e);
  return x;
}

Mat augment_moduli(const BaseRing& R, const Mat& F, const Vec& moduli, std::size_t& extra) {
  if (moduli.size() != F.rows()) throw DimensionMismatch("moduli length does not match rows");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < moduli.size(); ++i)
    if (!R.is_zero(moduli[i])) rows.push_back(i);
  extra = rows.size();
  Mat A(F.rows(), F.cols() + extra);
  for (std::size_t i = 0; i < F.rows(); ++i)
    for (std::size_t j = 0; j < F.cols(); ++j) A(i, j) = F(i, j);
  for (std::size_t k = 0; k < rows.size(); ++k) A(rows[k], F.cols() + k) = moduli[rows[k]];
  return A;
}

}  // namespace

std::optional<Vec> solve_linear(const BaseRing& R, const Mat& A, const Vec& b) {
  if (b.size() != A.rows()) {
    throw DimensionMismatch("right-hand side has length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(A.rows()));
  }
  ColumnEchelon ce = column_echelon(R, A);
  return echelon_solve(R, ce, b);
}

CongruenceSolver::CongruenceSolver(const BaseRing& R, const Mat& F, const Vec& moduli)
    : R_(R), unknowns_(F.cols()) {
  std::size_t extra = 0;
  ech_ = column_echelon(R, augment_moduli(R, F, moduli, extra));
}

std::optional<Vec> CongruenceSolver::solve(const Vec& b) const {
  if (b.size() != ech_.E.rows()) throw DimensionMismatch("right-hand side length mismatch");
  auto z = echelon_solve(R_, ech_, b);
  if (!z) return std::nullopt;
  z->resize(unknowns_);
  return z;
}

Mat congruence_kernel(const BaseRing& R, const Mat& F, const Vec& moduli) {
  std::size_t extra = 0;
  Mat A = augment_moduli(R, F, moduli, extra);
  Mat K = kernel_basis(R, A);
  Mat proj = K.row_range(0, F.cols());
  // The projection generates the lattice; echelon it down to a basis.
  ColumnEchelon ce = column_echelon(R, proj);
  return ce.E.col_range(0, ce.rank());
}

Presentation present(const BaseRing& R, std::size_t gens, const Mat& relation_cols) {
  Presentation p;
  if (relation_cols.cols() == 0 || relation_cols.is_zero()) {
    p.orders.assign(gens, Int(0));
    p.Q = Mat::identity(gens);
    p.S = Mat::identity(gens);
    return p;
  }
  if (relation_cols.rows() != gens) throw DimensionMismatch("relation columns must have one row per generator");
  SmithRequest want;
  want.U = true;
  want.V = false;
  want.U_inv = true;
  SmithForm sf = smith_normal_form(R, relation_cols, want);
  const std::size_t lim = std::min(gens, relation_cols.cols());
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < gens; ++i) {
    Int d = i < lim ? sf.D(i, i) : Int(0);
    if (R.is_unit(d)) continue;
    keep.push_back(i);
    p.orders.push_back(R.normalize(d));
  }
  p.Q = reduced_rows(R, sf.U.select_rows(keep), p.orders);
  p.S = reduced(R, sf.U_inv.select_cols(keep));
  return p;
}

SubgroupPresentation subgroup_presentation(const BaseRing& R, const Vec& amb_orders, const Mat& G) {
  SubgroupPresentation s;
  const std::size_t k = G.cols();
  if (k == 0) {
    s.inclusion = Mat(G.rows(), 0);
    return s;
  }
  Mat K = congruence_kernel(R, G, amb_orders);
  Presentation p = present(R, k, K);
  s.orders = p.orders;
  s.inclusion = reduced_rows(R, G * p.S, amb_orders);
  s.corestriction = p.Q;
  return s;
}

std::string abelian_group_string(const BaseRing& R, const Vec& orders) {
  if (orders.empty()) return "0";
  if (R.is_field()) return R.name() + "^" + std::to_string(orders.size());
  std::vector<std::string> parts;
  std::size_t free = 0;
  for (const auto& d : orders) {
    if (sgn(d) == 0)
      ++free;
    else
      parts.push_back("Z/" + d.get_str());
  }
  if (free == 1) parts.push_back("Z");
  if (free > 1) parts.push_back("Z^" + std::to_string(free));
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

Int determinant(const BaseRing& R, const Mat& A) {
  if (A.rows() != A.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = A.rows();
  if (n == 0) return Int(1);
  Mat M = reduced(R, A);
  Int sign = 1;
  if (R.is_field()) {
    Int det = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      while (p < n && sgn(M(p, k)) == 0) ++p;
      if (p == n) return Int(0);
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(M(k, j), M(p, j));
        sign = -sign;
      }
      det = R.reduce(det * M(k, k));
      Int inv = R.inverse(M(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        Int f = R.reduce(M(i, k) * inv);
        for (std::size_t j = k; j < n; ++j) M(i, j) = R.reduce(M(i, j) - f * M(k, j));
      }
    }
    return R.reduce(det * sign);
  }
  // Bareiss
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(M(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(M(p, k)) == 0) ++p;
      if (p == n) return Int(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(M(k, j), M(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = M(i, j) * M(k, k) - M(i, k) * M(k, j);
        mpz_divexact(M(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

}  // namespace abmc
