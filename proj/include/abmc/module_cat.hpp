#pragma once

// Finitely generated modules over finite-rank algebras.
//
// An algebra is a free base-module with basis b_0..b_{n-1} and structure
// constants b_i b_j = sum_k c_ij^k b_k. A module is stored by its underlying
// base-module in canonical form
//     R/(d_1) + ... + R/(d_t) + R^f,   d_1 | d_2 | ... | d_t non-units,
// one generator per summand, together with one action matrix per basis
// element of the algebra. Over a prime field the orders are all 0.
//
// These are the only categorical facts used from the ambient abelian
// category; none of them needs infinite colimits.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abmc/exact_linalg.hpp"

namespace abmc {

class AlgebraError : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

class AlgebraMismatch : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

class InvalidModule : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

class InvalidMorphism : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

class UnsupportedAlgebra : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

/// Multiplication table of a finite group, elements 0..|G|-1.
struct GroupData {
  std::vector<std::vector<std::size_t>> table;
  std::size_t identity = 0;
  std::vector<std::size_t> inverse;
};

class Algebra {
 public:
  Algebra(BaseRing base, std::vector<std::vector<Vec>> mult, Vec unit,
          std::vector<std::string> labels, std::string name, std::optional<GroupData> group);

  const BaseRing& base() const { return base_; }
  std::size_t rank() const { return rank_; }
  const Vec& product(std::size_t i, std::size_t j) const { return mult_[i][j]; }
  const std::vector<std::vector<Vec>>& table() const { return mult_; }
  const Vec& unit() const { return unit_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  const std::optional<GroupData>& group() const { return group_; }
  bool is_group_algebra() const { return group_.has_value(); }
  /// Basis elements that generate the algebra (with the unit).
  const std::vector<std::size_t>& generators() const { return generators_; }

  /// Product of two algebra elements given in coordinates.
  Vec multiply(const Vec& a, const Vec& b) const;
  Vec basis_element(std::size_t k) const;

  bool same_structure(const Algebra& o) const;

 private:
  BaseRing base_;
  std::size_t rank_;
  std::vector<std::vector<Vec>> mult_;
  Vec unit_;
  std::vector<std::string> labels_;
  std::string name_;
  std::optional<GroupData> group_;
  std::vector<std::size_t> generators_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Validates associativity and unitality exhaustively on basis elements.
AlgebraPtr make_algebra(const BaseRing& base, std::vector<std::vector<Vec>> mult, Vec unit,
                        std::vector<std::string> labels = {}, std::string name = "");
AlgebraPtr make_group_algebra(const BaseRing& base, const std::vector<std::vector<std::size_t>>& table,
                              std::vector<std::string> labels = {}, std::string name = "");
AlgebraPtr cyclic_group_algebra(const BaseRing& base, std::size_t n);
/// The base ring itself, as the group algebra of the trivial group.
AlgebraPtr base_algebra(const BaseRing& base);
/// Upper triangular 2x2 matrices, basis e11, e12, e22.
AlgebraPtr upper_triangular_algebra(const BaseRing& base);
AlgebraPtr opposite_algebra(const AlgebraPtr& A);

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);
/// "1 + g", "2*e11 - e12", ...
std::string element_string(const Algebra& A, const Vec& e);
void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b, const char* what);

class Morphism;

class Module {
 public:
  Module() = default;

  /// Canonical data, validated. Use make_module for arbitrary presentations.
  static Module from_canonical(AlgebraPtr A, Vec orders, std::vector<Mat> actions, std::string label = "");

  const AlgebraPtr& algebra() const { return d_->algebra; }
  const BaseRing& base() const { return d_->algebra->base(); }
  std::size_t gens() const { return d_->orders.size(); }
  const Vec& orders() const { return d_->orders; }
  const Mat& action(std::size_t k) const { return d_->actions[k]; }
  const std::vector<Mat>& actions() const { return d_->actions; }
  /// Relation matrix (one row per torsion generator).
  Mat relations() const;
  const std::string& label() const { return d_->label; }
  Module with_label(std::string label) const;

  bool is_zero() const { return gens() == 0; }
  std::size_t free_rank() const;
  Vec torsion() const;
  bool is_base_free() const { return free_rank() == gens(); }

  Vec reduce(Vec v) const;
  /// Rows of m reduced modulo this module's orders (m has gens() rows).
  Mat reduce_rows(Mat m) const;
  /// Matrix of the action of an algebra element.
  Mat act(const Vec& element) const;

  /// Canonical-form equality (same algebra, orders, actions).
  bool operator==(const Module& o) const;
  bool operator!=(const Module& o) const { return !(*this == o); }

  /// Underlying base module, e.g. "Z/2 + Z" or "F2^3".
  std::string structure_string() const;
  std::string describe() const;

 private:
  struct Data {
    AlgebraPtr algebra;
    Vec orders;
    std::vector<Mat> actions;
    std::string label;
  };
  explicit Module(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;

  friend Module make_canonical_module_unchecked(AlgebraPtr, Vec, std::vector<Mat>, std::string);
};

/// Canonical module without validation; for constructions that are correct
/// by construction.
Module make_canonical_module_unchecked(AlgebraPtr A, Vec orders, std::vector<Mat> actions,
                                       std::string label = "");

/// Module from an arbitrary presentation: `gens` base generators, relation
/// rows, and one action matrix per basis element (well defined modulo the
/// relations). The result is normalized to canonical form.
struct PresentedModule {
  Module module;
  Mat to_canonical;    // canonical x raw
  Mat from_canonical;  // raw x canonical
};
/// One column d_i e_i per torsion generator.
Mat relation_columns(const Module& M);

PresentedModule present_module(const AlgebraPtr& A, std::size_t gens, const Mat& relation_rows,
                               const std::vector<Mat>& actions, std::string label = "");
Module make_module(const AlgebraPtr& A, std::size_t gens, const Mat& relation_rows,
                   const std::vector<Mat>& actions, std::string label = "");

Module zero_module(const AlgebraPtr& A);
Module free_module(const AlgebraPtr& A, std::size_t r);
/// The map A^r -> N sending the s-th free generator to images[s].
Morphism free_map(const Module& F, const Module& N, const std::vector<Vec>& images);
/// Base ring (or R/(n)) with the trivial group action; group algebras only.
Module trivial_module(const AlgebraPtr& A, long order = 0);
/// Cyclic group algebras of order 2: base ring with the generator acting by -1.
Module sign_module(const AlgebraPtr& A, long order = 0);

class Morphism {
 public:
  Morphism() = default;
  /// Validates relations and action compatibility.
  Morphism(Module src, Module dst, Mat matrix);
  /// Skips validation; the matrix is still reduced.
  static Morphism trusted(Module src, Module dst, Mat matrix);

  static Morphism identity(const Module& M);
  static Morphism zero(const Module& src, const Module& dst);

  const Module& src() const { return src_; }
  const Module& dst() const { return dst_; }
  const Mat& matrix() const { return matrix_; }

  bool is_zero() const { return matrix_.is_zero(); }
  bool operator==(const Morphism& o) const;
  bool operator!=(const Morphism& o) const { return !(*this == o); }

  Morphism operator+(const Morphism& o) const;
  Morphism operator-(const Morphism& o) const;
  Morphism operator-() const;
  Morphism scaled(const Int& c) const;

  /// Image of an element of src.
  Vec apply(const Vec& x) const;

 private:
  Module src_, dst_;
  Mat matrix_;
};

/// g o f
Morphism compose(const Morphism& g, const Morphism& f);
/// Validation without throwing; returns the failed condition or empty.
std::optional<std::string> morphism_defect(const Module& src, const Module& dst, const Mat& matrix);

struct Kernel {
  Module module;
  Morphism inclusion;
};
struct Cokernel {
  Module module;
  Morphism projection;
  Mat section;  // dst.gens x module.gens, lifts canonical generators
};
struct Image {
  Module module;
  Morphism inclusion;   // image -> dst
  Morphism corestriction;  // src -> image
};

Kernel kernel(const Morphism& f);
Cokernel cokernel(const Morphism& f);
Image image(const Morphism& f);
bool is_mono(const Morphism& f);
bool is_epi(const Morphism& f);
bool is_iso(const Morphism& f);

/// Factor h : T -> M through a monomorphism m : K -> M, if h lands in its
/// image.
std::optional<Morphism> factor_through_mono(const Morphism& m, const Morphism& h);
/// Induced map C -> T from h : dst -> T with h o f = 0 (not re-checked).
Morphism descend(const Cokernel& c, const Morphism& h);
/// Factor h : T -> M through k with h landing in k's image (throws otherwise).
Morphism lift_into_kernel(const Kernel& k, const Morphism& h);

struct Biproduct {
  Module sum;
  Morphism in1, in2, pr1, pr2;
};
Biproduct direct_sum(const Module& M, const Module& N);
Module direct_sum_all(const std::vector<Module>& parts, const AlgebraPtr& A);
/// [f g] : X + Y -> Z
Morphism copair(const Biproduct& b, const Morphism& f, const Morphism& g);
/// (f, g) : T -> X + Y
Morphism pair_into(const Biproduct& b, const Morphism& f, const Morphism& g);
/// f + g : X + Y -> X' + Y'
Morphism sum_map(const Biproduct& from, const Biproduct& to, const Morphism& f, const Morphism& g);

struct Pullback {
  Module module;
  Morphism to_x, to_y;
  Kernel inner;   // kernel of (f, -g) : X + Y -> Z
  Biproduct sum;
};
Pullback pullback(const Morphism& f, const Morphism& g);
/// Unique map T -> P with to_x u = a, to_y u = b (requires f a = g b).
Morphism pullback_factor(const Pullback& P, const Morphism& a, const Morphism& b);

struct Pushout {
  Module module;
  Morphism from_x, from_y;
  Cokernel outer;  // cokernel of (f, -g) : Z -> X + Y
  Biproduct sum;
};
Pushout pushout(const Morphism& f, const Morphism& g);
/// Unique map Q -> T with u from_x = a, u from_y = b (requires a f = b g).
Morphism pushout_factor(const Pushout& Q, const Morphism& a, const Morphism& b);

/// Short exact sequence 0 -> A -i-> B -p-> C -> 0.
struct SES {
  Morphism i, p;
  const Module& left() const { return i.src(); }
  const Module& middle() const { return i.dst(); }
  const Module& right() const { return p.dst(); }
};
/// Validates monic/epic/exactness; throws InvalidMorphism otherwise.
SES make_ses(Morphism i, Morphism p);
std::optional<std::string> ses_defect(const Morphism& i, const Morphism& p);
/// 0 -> A -> A + B -> B -> 0
SES split_ses(const Module& A, const Module& B);
/// 0 -> ker f -> M -> im f -> 0 style sequences: kernel(p) -> B -> C for an epi p.
SES ses_from_epi(const Morphism& p);
SES ses_from_mono(const Morphism& i);

/// Underlying base tensor product with diagonal group action.
struct TensorProduct {
  Module module;
  Module left, right;
  Mat to_canonical, from_canonical;
};
TensorProduct tensor_diagonal(const Module& M, const Module& N);
/// f (x) g between the corresponding tensor products.
Morphism tensor_morphisms(const TensorProduct& from, const TensorProduct& to, const Morphism& f,
                          const Morphism& g);
/// Tensor unit: the trivial module.
Module tensor_unit(const AlgebraPtr& A);

struct PurityReport {
  bool pure = true;
  std::string witness;     // test module R/aR that breaks injectivity
  std::size_t bound = 64;
  std::string completeness_note;
};
/// Tensors s with R/aR for a = n*1 (2 <= n <= bound) and the cyclic test
/// elements b_k, 1 - b_k, 1 + b_k; pure iff every induced A/aA -> B/aB is
/// injective.
PurityReport is_pure(const SES& s, std::size_t bound = 64);

/// Base-dual D(M) = Hom_base(M, base) as a module over the opposite algebra
/// (field base only).
Module dual_module(const Module& M, const AlgebraPtr& opposite);
Morphism dual_morphism(const Morphism& f, const Module& dual_src, const Module& dual_dst);

}  // namespace abmc
