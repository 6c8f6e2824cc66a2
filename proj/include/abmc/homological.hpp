#pragma once

// Hom groups, free resolutions, Ext groups and extension classes.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abmc/module_cat.hpp"

namespace abmc {

/// Hom_A(M, N) as a base module in canonical form. Generator t of the group
/// is basis()[t]; it has order orders()[t].
class HomGroup {
 public:
  HomGroup() = default;
  HomGroup(Module src, Module dst);

  const Module& src() const { return src_; }
  const Module& dst() const { return dst_; }
  const std::vector<Morphism>& basis() const& { return basis_; }
  std::vector<Morphism> basis() && { return std::move(basis_); }
  const Vec& orders() const { return orders_; }
  std::size_t size() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  std::string structure_string() const { return abelian_group_string(src_.base(), orders_); }

  /// Coefficients of f in the basis, reduced modulo orders().
  Vec coordinates(const Morphism& f) const;
  Morphism element(const Vec& coeffs) const;

 private:
  Module src_, dst_;
  std::vector<Morphism> basis_;
  Vec orders_;
  Vec amb_orders_;  // per matrix entry, row-major
  Mat inclusion_;   // entries x basis
  std::shared_ptr<const CongruenceSolver> solver_;
};

HomGroup hom_group(const Module& M, const Module& N);

/// Solves sum_t x_t columns[t] = target modulo orders; absent if impossible.
std::optional<Vec> solve_in_group(const BaseRing& R, const std::vector<Vec>& columns, const Vec& target,
                                  const Vec& orders);

/// Canonical generators of M with redundant ones (those in the submodule
/// spanned by the others) dropped in order.
std::vector<Vec> module_generators(const Module& M);
/// Images of the free generators 1 (x) e_s under a map out of A^r.
std::vector<Vec> free_generator_images(const Morphism& pi);

/// 0 -> K -> F -> M -> 0 with F free on module_generators(M).
SES free_presentation(const Module& M);
/// Same on an explicit list of generating elements (throws if they do not
/// generate M).
SES free_presentation_on(const Module& M, const std::vector<Vec>& generators);

/// Lazily extended free resolution: stage j is 0 -> K_j -> F_j -> K_{j-1} -> 0
/// with K_{-1} = M.
class Resolution {
 public:
  explicit Resolution(Module M) : module_(std::move(M)) {}
  const Module& module() const { return module_; }
  const SES& stage(std::size_t j);
  /// K_{i-1}; syzygy(0) = M.
  Module syzygy(std::size_t i);

 private:
  Module module_;
  std::vector<SES> stages_;
};

/// Shared cached resolution for M.
std::shared_ptr<Resolution> resolution_of(const Module& M);

/// coker(Hom(F, N) -> Hom(K, N)) for a stage 0 -> K -> F -> X -> 0.
class ExtGroup {
 public:
  ExtGroup() = default;
  ExtGroup(SES stage, Module target, std::size_t degree);

  const Module& src() const { return stage_.right(); }
  const Module& dst() const { return target_; }
  std::size_t degree() const { return degree_; }
  const Vec& orders() const { return orders_; }
  bool is_zero() const { return orders_.empty(); }
  std::string structure_string() const { return abelian_group_string(target_.base(), orders_); }
  const SES& stage() const { return stage_; }
  const HomGroup& cocycles() const { return hom_k_; }

  /// Class of a cocycle K -> N.
  Vec class_of(const Morphism& cocycle) const;
  /// Representative cocycle of a class.
  Morphism cocycle(const Vec& cls) const;
  bool is_zero_class(const Vec& cls) const;
  std::vector<Morphism> cocycle_basis() const;

 private:
  SES stage_;
  Module target_;
  std::size_t degree_ = 1;
  HomGroup hom_k_;
  Vec orders_;
  Mat Q_, S_;
};

ExtGroup ext(const Module& M, const Module& N, std::size_t i);

/// Class of 0 -> A -> B -> C -> 0 in Ext^1(C, A) (relative to the cached
/// resolution of C), together with the Ext group it lives in.
struct ExtensionClass {
  ExtGroup group;
  Vec cls;
  bool is_zero() const { return group.is_zero_class(cls); }
};
ExtensionClass extension_class(const SES& s);
/// Pushout of the first resolution stage of C along a cocycle K -> A.
SES extension_from_class(const ExtGroup& g, const Vec& cls);

/// Section s : C -> B with p o s = id, if one exists.
std::optional<Morphism> is_split(const SES& s);
/// Morphisms factoring: solve p o x = target for x : T -> B.
std::optional<Morphism> lift_along(const Morphism& p, const Morphism& target);
/// Solve x o i = target for x : B -> E.
std::optional<Morphism> extend_along(const Morphism& i, const Morphism& target);

Module syzygy(const Module& M, std::size_t i);
bool is_projective(const Module& M);
bool is_injective(const Module& M);
bool proj_dim_at_most(const Module& M, std::size_t d);

/// Cached opposite algebra (same object for the same input).
AlgebraPtr cached_opposite(const AlgebraPtr& A);

}  // namespace abmc
