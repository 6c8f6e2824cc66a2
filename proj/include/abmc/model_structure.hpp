#pragma once

// The abelian model structure of two compatible complete cotorsion pairs:
// map classes, factorizations, lifts, weak equivalences, stable homs and
// the monoidal conditions.

#include <optional>
#include <string>
#include <vector>

#include "abmc/cotorsion.hpp"

namespace abmc {

class ThicknessFailed : public AbmcError {
 public:
  explicit ThicknessFailed(std::string certificate)
      : AbmcError("W is not thick: " + certificate), certificate_(std::move(certificate)) {}
  const std::string& certificate() const { return certificate_; }

 private:
  std::string certificate_;
};

class OrthogonalityFailed : public AbmcError {
 public:
  explicit OrthogonalityFailed(OrthogonalityCell cell)
      : AbmcError("Ext^" + std::to_string(cell.degree) + "(" + cell.d_name + ", " + cell.e_name +
                  ") = " + cell.structure),
        cell_(std::move(cell)) {}
  const OrthogonalityCell& cell() const { return cell_; }

 private:
  OrthogonalityCell cell_;
};

class NotLiftable : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

/// The square does not commute, or its legs are not a (cofibration,
/// fibration) pair with one of them acyclic.
class LiftPrecondition : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

enum class StructureKind { QuasiFrobenius, GorensteinProjective, GorensteinInjective, Custom };

struct ModelStructure {
  std::string name;
  StructureKind kind = StructureKind::Custom;
  AlgebraPtr algebra;
  ClassDescriptor C, F, W;
  CotorsionPair pair_cw_f;  // (C n W, F)
  CotorsionPair pair_c_fw;  // (C, F n W)
  std::vector<Module> catalog;  // modules the construction was validated on
  ThickReport thickness;
  OrthogonalityReport orth_cw_f, orth_c_fw;
};

/// Runs is_thick(W) on a sample drawn from the catalog and
/// check_orthogonality for both pairs on the catalog members of their
/// classes. Throws ThicknessFailed / OrthogonalityFailed.
ModelStructure make_model_structure(std::string name, StructureKind kind, ClassDescriptor C, ClassDescriptor F,
                                    ClassDescriptor W, CotorsionPair pair_cw_f, CotorsionPair pair_c_fw,
                                    std::vector<Module> catalog, std::uint64_t seed = 0);

/// C = F = All, W = Projectives.
ModelStructure quasi_frobenius_structure(const AlgebraPtr& A, const std::vector<Module>& catalog);
/// C = GP, F = All, W = PdAtMost(d), d the ring's injective dimension.
ModelStructure gorenstein_projective_structure(const AlgebraPtr& A, const std::vector<Module>& catalog,
                                               FamilySpec family = {});
/// C = All, F = GI, W = finite pd. Only over field-base group algebras,
/// where it coincides with the quasi-Frobenius structure.
ModelStructure gorenstein_injective_structure(const AlgebraPtr& A, const std::vector<Module>& catalog);

Verdict member_c(const ModelStructure& ms, const Module& X);
Verdict member_f(const ModelStructure& ms, const Module& X);
Verdict member_w(const ModelStructure& ms, const Module& X);

struct MapClass {
  Verdict cofibration, fibration, acyclic_cofibration, acyclic_fibration;
  std::optional<Verdict> weak_equivalence;
};
MapClass classify_map(const ModelStructure& ms, const Morphism& f, bool with_weak_equivalence = false);

enum class FactorMode { CofThenAcyFib, AcyCofThenFib };
std::string mode_string(FactorMode m);

struct Factorization {
  FactorMode mode = FactorMode::CofThenAcyFib;
  std::string route;  // mono, epi or general
  Morphism first, second;
  std::vector<Membership> verification;
};
Factorization factorize(const ModelStructure& ms, const Morphism& f, FactorMode mode);

/// Square  A -top-> E
///         i|       |p
///         B -bot-> X     with p top = bot i.
struct LiftProblem {
  Morphism i, p, top, bottom;
};
struct Lift {
  Morphism h;  // h i = top, p h = bottom
  std::string hypothesis;
};
Lift lift(const ModelStructure& ms, const LiftProblem& problem);

struct WeakEquivalence {
  Verdict verdict;
  Factorization factorization;
};
WeakEquivalence is_weak_equivalence(const ModelStructure& ms, const Morphism& f);

struct StableHom {
  HomGroup hom;
  std::vector<Morphism> projective_factoring;  // generators of the subgroup
  Vec orders;                                  // of the quotient
  std::string structure;
};
/// Hom(M, N) modulo maps factoring through a projective, computed through
/// the free cover of N.
StableHom stable_hom(const ModelStructure& ms, const Module& M, const Module& N);

/// (A (x) D) +_{A (x) C} (B (x) C) -> B (x) D for i : A -> B, j : C -> D.
Morphism pushout_product(const Morphism& i, const Morphism& j);

struct ConditionReport {
  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::string certificate;
  std::string note;
};
struct MonoidalReport {
  std::vector<ConditionReport> conditions;
  bool pass() const;
};
MonoidalReport monoidal_check(const ModelStructure& ms, const std::vector<Module>& catalog, std::uint64_t seed = 0);

}  // namespace abmc
