#include "abmc/module_cat.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace abmc {

namespace {

std::string vec_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

Vec reduce_all(const BaseRing& R, Vec v) {
  for (auto& e : v) e = R.reduce(e);
  return v;
}

// The base-span of the columns, echeloned for membership tests.
struct Lattice {
  ColumnEchelon ech;
  bool contains(const BaseRing& R, const Vec& v) const {
    if (ech.rank() == 0) {
      for (const auto& e : v)
        if (!R.is_zero(e)) return false;
      return true;
    }
    return solve_linear(R, ech.E.col_range(0, ech.rank()), v).has_value();
  }
};

Lattice lattice_of(const BaseRing& R, const std::vector<Vec>& cols, std::size_t n) {
  Mat m(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return Lattice{column_echelon(R, m)};
}

std::vector<Vec> subalgebra_span(const Algebra& A, const std::vector<std::size_t>& gens) {
  const BaseRing& R = A.base();
  std::vector<Vec> span{A.unit()};
  for (bool grew = true; grew;) {
    grew = false;
    Lattice L = lattice_of(R, span, A.rank());
    std::vector<Vec> current = span;
    for (const auto& e : current)
      for (std::size_t g : gens) {
        Vec p = A.multiply(e, A.basis_element(g));
        if (!L.contains(R, p)) {
          span.push_back(p);
          L = lattice_of(R, span, A.rank());
          grew = true;
        }
      }
  }
  return span;
}

// Actions induced on a submodule given by an injective inclusion matrix.
std::vector<Mat> restricted_actions(const Module& M, const Mat& inclusion, const Vec& sub_orders) {
  const BaseRing& R = M.base();
  CongruenceSolver solver(R, inclusion, M.orders());
  std::vector<Mat> acts;
  acts.reserve(M.actions().size());
  for (const Mat& a : M.actions()) {
    Mat target = a * inclusion;
    Mat X(inclusion.cols(), inclusion.cols());
    for (std::size_t c = 0; c < inclusion.cols(); ++c) {
      auto x = solver.solve(target.col(c));
      if (!x) throw AbmcError("internal: submodule is not stable under the action");
      X.set_col(c, *x);
    }
    acts.push_back(reduced_rows(R, std::move(X), sub_orders));
  }
  return acts;
}

std::vector<Mat> transported_actions(const BaseRing& R, const std::vector<Mat>& acts, const Mat& Q,
                                     const Mat& S, const Vec& orders) {
  std::vector<Mat> out;
  out.reserve(acts.size());
  for (const Mat& a : acts) out.push_back(reduced_rows(R, Q * a * S, orders));
  return out;
}

}  // namespace

Mat relation_columns(const Module& M) {
  std::vector<std::size_t> tors;
  for (std::size_t i = 0; i < M.gens(); ++i)
    if (sgn(M.orders()[i]) != 0) tors.push_back(i);
  Mat m(M.gens(), tors.size());
  for (std::size_t k = 0; k < tors.size(); ++k) m(tors[k], k) = M.orders()[tors[k]];
  return m;
}

namespace {

std::optional<std::string> canonical_defect(const AlgebraPtr& A, const Vec& orders,
                                            const std::vector<Mat>& actions) {
  const BaseRing& R = A->base();
  const std::size_t g = orders.size();
  bool free_seen = false;
  for (std::size_t i = 0; i < g; ++i) {
    const Int& d = orders[i];
    if (R.is_field()) {
      if (sgn(d) != 0) return "orders over a field must be 0";
      continue;
    }
    if (sgn(d) < 0 || d == 1) return "order " + d.get_str() + " is not a canonical invariant factor";
    if (sgn(d) == 0) {
      free_seen = true;
    } else {
      if (free_seen) return "torsion generators must precede free generators";
      if (i > 0 && !R.divides(orders[i - 1], d)) return "invariant factors must form a divisibility chain";
    }
  }
  if (actions.size() != A->rank())
    return "expected " + std::to_string(A->rank()) + " action matrices, got " + std::to_string(actions.size());
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const Mat& a = actions[k];
    if (a.rows() != g || a.cols() != g) return "action matrix " + std::to_string(k) + " has wrong shape";
    for (std::size_t j = 0; j < g; ++j) {
      if (sgn(orders[j]) == 0) continue;
      Vec c = a.col(j);
      for (auto& e : c) e *= orders[j];
      if (!rows_vanish_mod(R, Mat::column(c), orders))
        return "action of basis element " + std::to_string(k) + " does not preserve the relations";
    }
  }
  auto combo = [&](const Vec& coeffs) {
    Mat s(g, g);
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (!R.is_zero(coeffs[k])) s = s + actions[k].scaled(coeffs[k]);
    return reduced_rows(R, s, orders);
  };
  if (combo(A->unit()) != reduced_rows(R, Mat::identity(g), orders)) return "the unit does not act as the identity";
  for (std::size_t i = 0; i < A->rank(); ++i)
    for (std::size_t j = 0; j < A->rank(); ++j) {
      if (reduced_rows(R, actions[i] * actions[j], orders) != combo(A->product(i, j)))
        return "actions violate the product b" + std::to_string(i) + "*b" + std::to_string(j);
    }
  return std::nullopt;
}

}  // namespace

// ----------------------------------------------------------------- Algebra

Algebra::Algebra(BaseRing base, std::vector<std::vector<Vec>> mult, Vec unit,
                 std::vector<std::string> labels, std::string name, std::optional<GroupData> group)
    : base_(base),
      rank_(mult.size()),
      mult_(std::move(mult)),
      unit_(std::move(unit)),
      labels_(std::move(labels)),
      name_(std::move(name)),
      group_(std::move(group)) {
  if (labels_.size() != rank_) {
    labels_.clear();
    for (std::size_t i = 0; i < rank_; ++i) labels_.push_back("b" + std::to_string(i));
  }
  for (std::size_t k = 0; k < rank_; ++k) {
    auto span = subalgebra_span(*this, generators_);
    if (!lattice_of(base_, span, rank_).contains(base_, basis_element(k))) generators_.push_back(k);
  }
}

Vec Algebra::basis_element(std::size_t k) const {
  Vec v(rank_);
  v[k] = 1;
  return v;
}

Vec Algebra::multiply(const Vec& a, const Vec& b) const {
  Vec out(rank_);
  for (std::size_t i = 0; i < rank_; ++i) {
    if (base_.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < rank_; ++j) {
      if (base_.is_zero(b[j])) continue;
      Int c = a[i] * b[j];
      const Vec& p = mult_[i][j];
      for (std::size_t k = 0; k < rank_; ++k)
        if (sgn(p[k]) != 0) out[k] += c * p[k];
    }
  }
  return reduce_all(base_, out);
}

bool Algebra::same_structure(const Algebra& o) const {
  return base_ == o.base_ && mult_ == o.mult_ && unit_ == o.unit_;
}

AlgebraPtr make_algebra(const BaseRing& base, std::vector<std::vector<Vec>> mult, Vec unit,
                        std::vector<std::string> labels, std::string name) {
  const std::size_t n = mult.size();
  if (n == 0) throw AlgebraError("an algebra needs rank at least 1");
  if (unit.size() != n) throw AlgebraError("unit has length " + std::to_string(unit.size()) + ", expected " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (mult[i].size() != n) throw AlgebraError("multiplication table row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      if (mult[i][j].size() != n)
        throw AlgebraError("structure constants for b" + std::to_string(i) + "*b" + std::to_string(j) + " have wrong length");
      mult[i][j] = reduce_all(base, mult[i][j]);
    }
  }
  unit = reduce_all(base, unit);
  Algebra probe(base, mult, unit, labels, name, std::nullopt);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Vec lhs = probe.multiply(probe.product(i, j), probe.basis_element(k));
        Vec rhs = probe.multiply(probe.basis_element(i), probe.product(j, k));
        if (lhs != rhs)
          throw AlgebraError("associativity fails on basis triple (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + std::to_string(k) + ")");
      }
  for (std::size_t i = 0; i < n; ++i) {
    Vec b = probe.basis_element(i);
    if (probe.multiply(unit, b) != b || probe.multiply(b, unit) != b)
      throw AlgebraError("unit law fails on basis element " + std::to_string(i) + " " + vec_string(unit));
  }
  return std::make_shared<const Algebra>(base, std::move(mult), std::move(unit), std::move(labels), std::move(name),
                                         std::nullopt);
}

AlgebraPtr make_group_algebra(const BaseRing& base, const std::vector<std::vector<std::size_t>>& table,
                              std::vector<std::string> labels, std::string name) {
  const std::size_t n = table.size();
  if (n == 0) throw AlgebraError("a group needs at least one element");
  std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n, Vec(n)));
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw AlgebraError("group table row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      if (table[i][j] >= n) throw AlgebraError("group table entry out of range");
      mult[i][j][table[i][j]] = 1;
    }
  }
  GroupData gd;
  gd.table = table;
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) {
      gd.identity = e;
      found = true;
    }
  }
  if (!found) throw AlgebraError("group table has no identity element");
  gd.inverse.assign(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (table[x][y] == gd.identity) gd.inverse[x] = y;
  for (std::size_t x = 0; x < n; ++x)
    if (gd.inverse[x] == n) throw AlgebraError("group element " + std::to_string(x) + " has no inverse");
  Vec unit(n);
  unit[gd.identity] = 1;
  AlgebraPtr checked = make_algebra(base, mult, unit, labels, name);
  return std::make_shared<const Algebra>(base, checked->table(), checked->unit(), checked->labels(), name,
                                         std::move(gd));
}

AlgebraPtr cyclic_group_algebra(const BaseRing& base, std::size_t n) {
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(i == 0 ? "1" : i == 1 ? "g" : "g^" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return make_group_algebra(base, table, labels, base.name() + "[C" + std::to_string(n) + "]");
}

AlgebraPtr base_algebra(const BaseRing& base) {
  return make_group_algebra(base, {{0}}, {"1"}, base.name());
}

AlgebraPtr upper_triangular_algebra(const BaseRing& base) {
  const std::size_t n = 3;
  std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n, Vec(n)));
  mult[0][0][0] = 1;  // e11 e11 = e11
  mult[0][1][1] = 1;  // e11 e12 = e12
  mult[1][2][1] = 1;  // e12 e22 = e12
  mult[2][2][2] = 1;  // e22 e22 = e22
  return make_algebra(base, mult, Vec{1, 0, 1}, {"e11", "e12", "e22"}, "T2(" + base.name() + ")");
}

AlgebraPtr opposite_algebra(const AlgebraPtr& A) {
  const std::size_t n = A->rank();
  std::vector<std::vector<Vec>> mult(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mult[i][j] = A->product(j, i);
  std::optional<GroupData> group;
  if (A->group()) {
    GroupData gd = *A->group();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gd.table[i][j] = A->group()->table[j][i];
    group = gd;
  }
  return std::make_shared<const Algebra>(A->base(), mult, A->unit(), A->labels(), A->name() + "^op", group);
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a == b || (a && b && a->same_structure(*b));
}

void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b, const char* what) {
  if (!same_algebra(a, b)) throw AlgebraMismatch(std::string(what) + ": modules live over different algebras");
}

// ------------------------------------------------------------------ Module

Module make_canonical_module_unchecked(AlgebraPtr A, Vec orders, std::vector<Mat> actions, std::string label) {
  auto d = std::make_shared<Module::Data>();
  d->algebra = std::move(A);
  d->orders = std::move(orders);
  d->actions = std::move(actions);
  d->label = std::move(label);
  return Module(std::move(d));
}

Module Module::from_canonical(AlgebraPtr A, Vec orders, std::vector<Mat> actions, std::string label) {
  const BaseRing& R = A->base();
  for (auto& d : orders) d = R.normalize(d);
  for (auto& a : actions)
    if (a.rows() == orders.size() && a.cols() == orders.size()) a = reduced_rows(R, a, orders);
  if (auto err = canonical_defect(A, orders, actions)) throw InvalidModule(*err);
  return make_canonical_module_unchecked(std::move(A), std::move(orders), std::move(actions), std::move(label));
}

Module Module::with_label(std::string label) const {
  return make_canonical_module_unchecked(d_->algebra, d_->orders, d_->actions, std::move(label));
}

Mat Module::relations() const { return relation_columns(*this).transpose(); }

std::size_t Module::free_rank() const {
  std::size_t f = 0;
  for (const auto& d : d_->orders)
    if (sgn(d) == 0) ++f;
  return f;
}

Vec Module::torsion() const {
  Vec t;
  for (const auto& d : d_->orders)
    if (sgn(d) != 0) t.push_back(d);
  return t;
}

Vec Module::reduce(Vec v) const { return reduced_vec(base(), std::move(v), d_->orders); }

Mat Module::reduce_rows(Mat m) const { return reduced_rows(base(), std::move(m), d_->orders); }

Mat Module::act(const Vec& element) const {
  Mat s(gens(), gens());
  for (std::size_t k = 0; k < element.size(); ++k)
    if (!base().is_zero(element[k])) s = s + d_->actions[k].scaled(element[k]);
  return reduce_rows(std::move(s));
}

bool Module::operator==(const Module& o) const {
  if (d_ == o.d_) return true;
  if (!d_ || !o.d_) return false;
  return same_algebra(d_->algebra, o.d_->algebra) && d_->orders == o.d_->orders && d_->actions == o.d_->actions;
}

std::string Module::structure_string() const { return abelian_group_string(base(), orders()); }

std::string Module::describe() const {
  std::string s = structure_string();
  if (!label().empty()) s = label() + " [" + s + "]";
  return s;
}

PresentedModule present_module(const AlgebraPtr& A, std::size_t gens, const Mat& relation_rows,
                               const std::vector<Mat>& actions, std::string label) {
  const BaseRing& R = A->base();
  if (actions.size() != A->rank())
    throw InvalidModule("expected " + std::to_string(A->rank()) + " action matrices, got " + std::to_string(actions.size()));
  for (std::size_t k = 0; k < actions.size(); ++k)
    if (actions[k].rows() != gens || actions[k].cols() != gens)
      throw InvalidModule("action matrix " + std::to_string(k) + " must be " + std::to_string(gens) + "x" + std::to_string(gens));
  if (relation_rows.rows() > 0 && relation_rows.cols() != gens)
    throw InvalidModule("relations must have one column per generator");
  Mat rel = relation_rows.rows() > 0 ? relation_rows.transpose() : Mat(gens, 0);
  Presentation p = present(R, gens, rel);
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (!rows_vanish_mod(R, p.Q * actions[k] * rel, p.orders))
      throw InvalidModule("action of basis element " + std::to_string(k) + " does not preserve the relations");
  }
  PresentedModule pm;
  std::vector<Mat> acts = transported_actions(R, actions, p.Q, p.S, p.orders);
  if (auto err = canonical_defect(A, p.orders, acts)) throw InvalidModule(*err);
  pm.module = make_canonical_module_unchecked(A, p.orders, std::move(acts), std::move(label));
  pm.to_canonical = p.Q;
  pm.from_canonical = p.S;
  return pm;
}

Module make_module(const AlgebraPtr& A, std::size_t gens, const Mat& relation_rows, const std::vector<Mat>& actions,
                   std::string label) {
  return present_module(A, gens, relation_rows, actions, std::move(label)).module;
}

Module zero_module(const AlgebraPtr& A) {
  return make_canonical_module_unchecked(A, {}, std::vector<Mat>(A->rank(), Mat(0, 0)), "0");
}

Module free_module(const AlgebraPtr& A, std::size_t r) {
  const std::size_t n = A->rank();
  // Left regular representation: b_k . b_j = sum_l c_kj^l b_l.
  std::vector<Mat> acts;
  for (std::size_t k = 0; k < n; ++k) {
    Mat reg(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) reg(l, j) = A->product(k, j)[l];
    Mat blocks(0, 0);
    for (std::size_t c = 0; c < r; ++c) blocks = block_diag(blocks, reg);
    acts.push_back(blocks);
  }
  std::string label = r == 0 ? "0" : r == 1 ? A->name() : A->name() + "^" + std::to_string(r);
  return make_canonical_module_unchecked(A, Vec(n * r), std::move(acts), label);
}

Morphism free_map(const Module& F, const Module& N, const std::vector<Vec>& images) {
  const AlgebraPtr& A = N.algebra();
  const std::size_t n = A->rank();
  if (F.gens() != n * images.size()) throw InvalidMorphism("free_map: one image per free generator expected");
  Mat m(N.gens(), F.gens());
  for (std::size_t s = 0; s < images.size(); ++s) {
    if (images[s].size() != N.gens()) throw InvalidMorphism("free_map: image has the wrong length");
    for (std::size_t k = 0; k < n; ++k) {
      // b_k (x) e_s  ->  b_k . v_s, written in the basis of A (x) e_s.
      Vec col = N.action(k) * images[s];
      for (std::size_t i = 0; i < N.gens(); ++i) m(i, s * n + k) = col[i];
    }
  }
  return Morphism::trusted(F, N, m);
}

Module trivial_module(const AlgebraPtr& A, long order) {
  if (!A->is_group_algebra()) throw UnsupportedAlgebra("trivial modules need a group algebra");
  const BaseRing& R = A->base();
  std::vector<Mat> acts(A->rank(), Mat::identity(1));
  const bool torsion = order != 0 && !R.is_field();
  Mat rel = torsion ? Mat::from_rows({{order}}) : Mat(0, 1);
  std::string label;
  if (A->rank() == 1)
    label = torsion ? R.name() + "/" + std::to_string(order) : R.name();
  else if (R.is_field())
    label = "k";
  else
    label = torsion ? "Z/" + std::to_string(order) + "_triv" : "Z_triv";
  return make_module(A, 1, rel, acts, label);
}

Module sign_module(const AlgebraPtr& A, long order) {
  if (!A->is_group_algebra() || A->rank() != 2) throw UnsupportedAlgebra("sign modules need a group of order 2");
  const BaseRing& R = A->base();
  const std::size_t e = A->group()->identity;
  std::vector<Mat> acts(2);
  acts[e] = Mat::identity(1);
  acts[1 - e] = Mat::from_rows({{-1}});
  const bool torsion = order != 0 && !R.is_field();
  Mat rel = torsion ? Mat::from_rows({{order}}) : Mat(0, 1);
  std::string label;
  if (R.is_field())
    label = R.characteristic() == 2 ? "k" : "k_sign";
  else
    label = torsion ? "Z/" + std::to_string(order) + "_sign" : "Z_sign";
  return make_module(A, 1, rel, acts, label);
}

// ---------------------------------------------------------------- Morphism

std::optional<std::string> morphism_defect(const Module& src, const Module& dst, const Mat& matrix) {
  if (!same_algebra(src.algebra(), dst.algebra())) return "source and target live over different algebras";
  if (matrix.rows() != dst.gens() || matrix.cols() != src.gens())
    return "matrix is " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) + ", expected " +
           std::to_string(dst.gens()) + "x" + std::to_string(src.gens());
  const BaseRing& R = src.base();
  for (std::size_t j = 0; j < src.gens(); ++j) {
    if (sgn(src.orders()[j]) == 0) continue;
    Vec c = matrix.col(j);
    for (auto& e : c) e *= src.orders()[j];
    if (!rows_vanish_mod(R, Mat::column(c), dst.orders()))
      return "generator " + std::to_string(j) + " of order " + src.orders()[j].get_str() + " maps to an element of larger order";
  }
  for (std::size_t k : src.algebra()->generators()) {
    Mat lhs = dst.reduce_rows(matrix * src.action(k));
    Mat rhs = dst.reduce_rows(dst.action(k) * matrix);
    if (lhs != rhs) return "map does not commute with the action of " + src.algebra()->labels()[k];
  }
  return std::nullopt;
}

Morphism::Morphism(Module src, Module dst, Mat matrix)
    : src_(std::move(src)), dst_(std::move(dst)), matrix_(std::move(matrix)) {
  if (auto err = morphism_defect(src_, dst_, matrix_)) throw InvalidMorphism(*err);
  matrix_ = dst_.reduce_rows(std::move(matrix_));
}

Morphism Morphism::trusted(Module src, Module dst, Mat matrix) {
  Morphism f;
  if (matrix.rows() != dst.gens() || matrix.cols() != src.gens())
    throw InvalidMorphism("internal: morphism matrix has the wrong shape");
  f.matrix_ = dst.reduce_rows(std::move(matrix));
  f.src_ = std::move(src);
  f.dst_ = std::move(dst);
  return f;
}

Morphism Morphism::identity(const Module& M) { return trusted(M, M, Mat::identity(M.gens())); }

Morphism Morphism::zero(const Module& src, const Module& dst) {
  require_same_algebra(src.algebra(), dst.algebra(), "zero morphism");
  return trusted(src, dst, Mat(dst.gens(), src.gens()));
}

bool Morphism::operator==(const Morphism& o) const {
  return matrix_ == o.matrix_ && src_ == o.src_ && dst_ == o.dst_;
}

Morphism Morphism::operator+(const Morphism& o) const {
  if (o.src_.gens() != src_.gens() || o.dst_.gens() != dst_.gens()) throw InvalidMorphism("sum of incompatible morphisms");
  return trusted(src_, dst_, matrix_ + o.matrix_);
}

Morphism Morphism::operator-(const Morphism& o) const {
  if (o.src_.gens() != src_.gens() || o.dst_.gens() != dst_.gens())
    throw InvalidMorphism("difference of incompatible morphisms");
  return trusted(src_, dst_, matrix_ - o.matrix_);
}

Morphism Morphism::operator-() const { return trusted(src_, dst_, -matrix_); }

Morphism Morphism::scaled(const Int& c) const { return trusted(src_, dst_, matrix_.scaled(c)); }

Vec Morphism::apply(const Vec& x) const { return dst_.reduce(matrix_ * x); }

Morphism compose(const Morphism& g, const Morphism& f) {
  if (f.dst().gens() != g.src().gens() || !same_algebra(f.dst().algebra(), g.src().algebra()))
    throw InvalidMorphism("composition of non-composable morphisms");
  return Morphism::trusted(f.src(), g.dst(), g.matrix() * f.matrix());
}

// ------------------------------------------------- kernels and cokernels

Kernel kernel(const Morphism& f) {
  const Module& M = f.src();
  const BaseRing& R = M.base();
  Mat P = congruence_kernel(R, f.matrix(), f.dst().orders());
  SubgroupPresentation s = subgroup_presentation(R, M.orders(), P);
  std::vector<Mat> acts = restricted_actions(M, s.inclusion, s.orders);
  Module K = make_canonical_module_unchecked(M.algebra(), s.orders, std::move(acts));
  return Kernel{K, Morphism::trusted(K, M, s.inclusion)};
}

Cokernel cokernel(const Morphism& f) {
  const Module& N = f.dst();
  const BaseRing& R = N.base();
  Mat rel = hcat(relation_columns(N), f.matrix());
  Presentation p = present(R, N.gens(), rel);
  std::vector<Mat> acts = transported_actions(R, N.actions(), p.Q, p.S, p.orders);
  Module C = make_canonical_module_unchecked(N.algebra(), p.orders, std::move(acts));
  return Cokernel{C, Morphism::trusted(N, C, p.Q), p.S};
}

Image image(const Morphism& f) {
  const Module& N = f.dst();
  const BaseRing& R = N.base();
  SubgroupPresentation s = subgroup_presentation(R, N.orders(), f.matrix());
  std::vector<Mat> acts = restricted_actions(N, s.inclusion, s.orders);
  Module I = make_canonical_module_unchecked(N.algebra(), s.orders, std::move(acts));
  Mat cores = f.src().gens() == 0 ? Mat(I.gens(), 0) : s.corestriction;
  return Image{I, Morphism::trusted(I, N, s.inclusion), Morphism::trusted(f.src(), I, cores)};
}

bool is_mono(const Morphism& f) { return kernel(f).module.is_zero(); }

bool is_epi(const Morphism& f) {
  const Module& N = f.dst();
  Presentation p = present(N.base(), N.gens(), hcat(relation_columns(N), f.matrix()));
  return p.orders.empty();
}

bool is_iso(const Morphism& f) { return is_epi(f) && is_mono(f); }

std::optional<Morphism> factor_through_mono(const Morphism& m, const Morphism& h) {
  const Module& M = m.dst();
  CongruenceSolver solver(M.base(), m.matrix(), M.orders());
  Mat X(m.src().gens(), h.src().gens());
  for (std::size_t c = 0; c < h.src().gens(); ++c) {
    auto x = solver.solve(h.matrix().col(c));
    if (!x) return std::nullopt;
    X.set_col(c, *x);
  }
  return Morphism::trusted(h.src(), m.src(), X);
}

Morphism descend(const Cokernel& c, const Morphism& h) {
  return Morphism::trusted(c.module, h.dst(), h.matrix() * c.section);
}

Morphism lift_into_kernel(const Kernel& k, const Morphism& h) {
  auto u = factor_through_mono(k.inclusion, h);
  if (!u) throw InvalidMorphism("map does not land in the kernel");
  return *u;
}

// --------------------------------------------------- sums, pullbacks, pushouts

Biproduct direct_sum(const Module& M, const Module& N) {
  require_same_algebra(M.algebra(), N.algebra(), "direct_sum");
  const AlgebraPtr& A = M.algebra();
  const std::size_t gm = M.gens(), gn = N.gens(), g = gm + gn;
  std::vector<Mat> acts;
  for (std::size_t k = 0; k < A->rank(); ++k) acts.push_back(block_diag(M.action(k), N.action(k)));
  Mat rel = block_diag(relation_columns(M), relation_columns(N));
  const BaseRing& R = A->base();
  Presentation p = present(R, g, rel);
  std::string label;
  if (!M.label().empty() && !N.label().empty()) label = M.label() + " + " + N.label();
  if (M.is_zero()) label = N.label();
  if (N.is_zero()) label = M.label();
  Module S = make_canonical_module_unchecked(A, p.orders, transported_actions(R, acts, p.Q, p.S, p.orders), label);
  Biproduct b;
  b.sum = S;
  b.in1 = Morphism::trusted(M, S, p.Q.col_range(0, gm));
  b.in2 = Morphism::trusted(N, S, p.Q.col_range(gm, gn));
  b.pr1 = Morphism::trusted(S, M, p.S.row_range(0, gm));
  b.pr2 = Morphism::trusted(S, N, p.S.row_range(gm, gn));
  return b;
}

Module direct_sum_all(const std::vector<Module>& parts, const AlgebraPtr& A) {
  Module acc = zero_module(A);
  for (const auto& p : parts) acc = direct_sum(acc, p).sum;
  return acc;
}

Morphism copair(const Biproduct& b, const Morphism& f, const Morphism& g) {
  return compose(f, b.pr1) + compose(g, b.pr2);
}

Morphism pair_into(const Biproduct& b, const Morphism& f, const Morphism& g) {
  return compose(b.in1, f) + compose(b.in2, g);
}

Morphism sum_map(const Biproduct& from, const Biproduct& to, const Morphism& f, const Morphism& g) {
  return compose(to.in1, compose(f, from.pr1)) + compose(to.in2, compose(g, from.pr2));
}

Pullback pullback(const Morphism& f, const Morphism& g) {
  if (f.dst().gens() != g.dst().gens()) throw InvalidMorphism("pullback needs a common codomain");
  Pullback P;
  P.sum = direct_sum(f.src(), g.src());
  P.inner = kernel(copair(P.sum, f, -g));
  P.module = P.inner.module;
  P.to_x = compose(P.sum.pr1, P.inner.inclusion);
  P.to_y = compose(P.sum.pr2, P.inner.inclusion);
  return P;
}

Morphism pullback_factor(const Pullback& P, const Morphism& a, const Morphism& b) {
  return lift_into_kernel(P.inner, pair_into(P.sum, a, b));
}

Pushout pushout(const Morphism& f, const Morphism& g) {
  if (f.src().gens() != g.src().gens()) throw InvalidMorphism("pushout needs a common domain");
  Pushout Q;
  Q.sum = direct_sum(f.dst(), g.dst());
  Q.outer = cokernel(pair_into(Q.sum, f, -g));
  Q.module = Q.outer.module;
  Q.from_x = compose(Q.outer.projection, Q.sum.in1);
  Q.from_y = compose(Q.outer.projection, Q.sum.in2);
  return Q;
}

Morphism pushout_factor(const Pushout& Q, const Morphism& a, const Morphism& b) {
  return descend(Q.outer, copair(Q.sum, a, b));
}

// ---------------------------------------------------------------------- SES

std::optional<std::string> ses_defect(const Morphism& i, const Morphism& p) {
  if (i.dst() != p.src()) return "middle terms do not match";
  if (!compose(p, i).is_zero()) return "p o i is not zero";
  if (!is_mono(i)) return "i is not a monomorphism";
  if (!is_epi(p)) return "p is not an epimorphism";
  if (!factor_through_mono(i, kernel(p).inclusion)) return "kernel of p is larger than the image of i";
  return std::nullopt;
}

SES make_ses(Morphism i, Morphism p) {
  if (auto err = ses_defect(i, p)) throw InvalidMorphism("not a short exact sequence: " + *err);
  return SES{std::move(i), std::move(p)};
}

SES split_ses(const Module& A, const Module& B) {
  Biproduct b = direct_sum(A, B);
  return SES{b.in1, b.pr2};
}

SES ses_from_epi(const Morphism& p) {
  Kernel k = kernel(p);
  return SES{k.inclusion, p};
}

SES ses_from_mono(const Morphism& i) {
  Cokernel c = cokernel(i);
  return SES{i, c.projection};
}

// ------------------------------------------------------------------- tensor

TensorProduct tensor_diagonal(const Module& M, const Module& N) {
  require_same_algebra(M.algebra(), N.algebra(), "tensor_diagonal");
  const AlgebraPtr& A = M.algebra();
  if (!A->is_group_algebra()) throw UnsupportedAlgebra("tensor products need a group algebra or the base ring");
  const std::size_t gm = M.gens(), gn = N.gens();
  std::vector<Vec> rels;
  for (std::size_t i = 0; i < gm; ++i)
    for (std::size_t j = 0; j < gn; ++j) {
      const Int& a = M.orders()[i];
      const Int& b = N.orders()[j];
      if (sgn(a) == 0 && sgn(b) == 0) continue;
      Int d = sgn(a) == 0 ? b : sgn(b) == 0 ? a : Int(gcd(a, b));
      Vec r(gm * gn);
      r[i * gn + j] = d;
      rels.push_back(r);
    }
  Mat rel(rels.size(), gm * gn);
  for (std::size_t r = 0; r < rels.size(); ++r)
    for (std::size_t c = 0; c < gm * gn; ++c) rel(r, c) = rels[r][c];
  std::vector<Mat> acts;
  for (std::size_t k = 0; k < A->rank(); ++k) acts.push_back(kron(M.action(k), N.action(k)));
  std::string label;
  if (!M.label().empty() && !N.label().empty()) label = M.label() + " (x) " + N.label();
  PresentedModule pm = present_module(A, gm * gn, rel, acts, label);
  return TensorProduct{pm.module, M, N, pm.to_canonical, pm.from_canonical};
}

Morphism tensor_morphisms(const TensorProduct& from, const TensorProduct& to, const Morphism& f, const Morphism& g) {
  if (f.src() != from.left || g.src() != from.right || f.dst() != to.left || g.dst() != to.right)
    throw InvalidMorphism("tensor_morphisms: factors do not match the tensor products");
  return Morphism::trusted(from.module, to.module, to.to_canonical * kron(f.matrix(), g.matrix()) * from.from_canonical);
}

Module tensor_unit(const AlgebraPtr& A) { return trivial_module(A); }

// ------------------------------------------------------------------- purity

std::string element_string(const Algebra& A, const Vec& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (sgn(e[k]) == 0) continue;
    Int c = e[k];
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    std::string term = A.labels()[k];
    if (c != 1) term = c.get_str() + (term == "1" ? "" : "*" + term);
    if (s.empty())
      s = (neg ? "-" : "") + term;
    else
      s += (neg ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

namespace {

struct GroupQuotient {
  Vec orders;
  Mat Q, S;
};

// M / aM as a base module.
GroupQuotient quotient_by_element(const Module& M, const Vec& a) {
  Presentation p = present(M.base(), M.gens(), hcat(relation_columns(M), M.act(a)));
  return GroupQuotient{p.orders, p.Q, p.S};
}

bool injective_on_quotients(const SES& s, const Vec& a) {
  GroupQuotient qa = quotient_by_element(s.left(), a);
  GroupQuotient qb = quotient_by_element(s.middle(), a);
  const BaseRing& R = s.left().base();
  if (qa.orders.empty()) return true;
  Mat map = reduced_rows(R, qb.Q * s.i.matrix() * qa.S, qb.orders);
  Mat K = congruence_kernel(R, map, qb.orders);
  return rows_vanish_mod(R, K, qa.orders);
}

}  // namespace

PurityReport is_pure(const SES& s, std::size_t bound) {
  const Algebra& A = *s.left().algebra();
  const BaseRing& R = A.base();
  PurityReport rep;
  rep.bound = bound;
  Int largest = 0;
  for (const Module* m : {&s.left(), &s.middle(), &s.right()})
    for (const auto& d : m->torsion())
      if (d > largest) largest = d;
  rep.completeness_note = "sound; complete for finitely generated underlying groups when the bound exceeds the largest "
                          "invariant factor (largest here: " + largest.get_str() + ", bound " + std::to_string(bound) +
                          (Int(static_cast<unsigned long>(bound)) > largest ? ", complete)" : ", not guaranteed complete)");
  std::vector<std::pair<Vec, std::string>> tests;
  for (std::size_t n = 2; n <= bound; ++n) {
    if (R.is_field() && n % R.characteristic() == 0) continue;
    if (R.is_field() && n > R.characteristic()) break;
    Vec a = A.unit();
    for (auto& e : a) e *= static_cast<unsigned long>(n);
    tests.emplace_back(a, R.name() + "/" + std::to_string(n));
  }
  std::set<Vec> seen;
  for (std::size_t k = 0; k < A.rank(); ++k) {
    Vec b = A.basis_element(k);
    for (int sign : {0, -1, 1}) {
      Vec a = b;
      if (sign != 0)
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = R.reduce(A.unit()[j] + sign * b[j]);
      bool zero = std::all_of(a.begin(), a.end(), [&](const Int& x) { return R.is_zero(x); });
      if (zero || a == A.unit() || !seen.insert(a).second) continue;
      tests.emplace_back(a, A.name() + "/" + A.name() + "(" + element_string(A, a) + ")");
    }
  }
  for (const auto& [a, name] : tests) {
    if (!injective_on_quotients(s, a)) {
      rep.pure = false;
      rep.witness = name;
      return rep;
    }
  }
  return rep;
}

// ------------------------------------------------------------------ duality

Module dual_module(const Module& M, const AlgebraPtr& opposite) {
  if (!M.base().is_field()) throw UnsupportedAlgebra("base duals need a field base");
  std::vector<Mat> acts;
  for (const Mat& a : M.actions()) acts.push_back(a.transpose());
  std::string label = M.label().empty() ? "" : "D(" + M.label() + ")";
  return make_canonical_module_unchecked(opposite, M.orders(), std::move(acts), label);
}

Morphism dual_morphism(const Morphism& f, const Module& dual_src, const Module& dual_dst) {
  return Morphism::trusted(dual_src, dual_dst, f.matrix().transpose());
}

}  // namespace abmc
