#pragma once

// Classes of modules, cotorsion pairs and their approximation sequences,
// thickness and hereditarity sweeps, and the Gorenstein classes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abmc/catalog.hpp"

namespace abmc {

class NoProvider : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

/// A constructive approximation produced a sequence whose outer terms fail a
/// membership check. The certificate names the failing stage and witness.
class ProviderFailed : public AbmcError {
 public:
  ProviderFailed(std::string stage, std::string certificate)
      : AbmcError("provider failed at " + stage + ": " + certificate),
        stage_(std::move(stage)),
        certificate_(std::move(certificate)) {}
  const std::string& stage() const { return stage_; }
  const std::string& certificate() const { return certificate_; }

 private:
  std::string stage_, certificate_;
};

/// Name for reports: the label, or the group structure if unlabelled.
std::string display_name(const Module& M);
std::string ses_string(const SES& s);

enum class VerdictKind { Yes, No, YesRelativeToFamily };

struct Verdict {
  VerdictKind kind = VerdictKind::Yes;
  std::string certificate;  // witness of failure, or the family a relative yes refers to

  bool holds() const { return kind != VerdictKind::No; }
  static Verdict yes() { return {}; }
  static Verdict no(std::string why) { return {VerdictKind::No, std::move(why)}; }
  static Verdict relative(std::string family) { return {VerdictKind::YesRelativeToFamily, std::move(family)}; }
};
std::string verdict_string(VerdictKind k);
/// Conjunction: first No wins; otherwise relative if any part is relative.
Verdict both(const Verdict& a, const Verdict& b);

/// Finite family of finite-projective-dimension test modules for the
/// Gorenstein classes: `size` cokernels of seeded random monos between frees
/// of rank <= max_rank, plus the rank-1 free module and the members of the
/// small catalog with pd <= d.
struct FamilySpec {
  std::uint64_t seed = 0xC07;
  std::size_t size = 32;
  std::size_t max_rank = 3;
  std::string rule = "cokernels of random monos between frees of rank <= 3";
  std::string describe() const;
};
std::vector<Module> witness_family(const AlgebraPtr& A, std::size_t d, const FamilySpec& spec);

enum class ClassKind {
  All,
  Zero,
  Projectives,
  Injectives,
  PdAtMost,
  RightOrthOf,
  LeftOrthOf,
  GorensteinProjective,
  Explicit
};

struct ClassDescriptor {
  ClassKind kind = ClassKind::All;
  AlgebraPtr algebra;
  std::size_t d = 0;
  std::vector<Module> modules;  // generators or explicit members
  FamilySpec family;

  static ClassDescriptor all(AlgebraPtr A) { return {ClassKind::All, std::move(A), 0, {}, {}}; }
  static ClassDescriptor zero(AlgebraPtr A) { return {ClassKind::Zero, std::move(A), 0, {}, {}}; }
  static ClassDescriptor projectives(AlgebraPtr A) { return {ClassKind::Projectives, std::move(A), 0, {}, {}}; }
  static ClassDescriptor injectives(AlgebraPtr A) { return {ClassKind::Injectives, std::move(A), 0, {}, {}}; }
  static ClassDescriptor pd_at_most(AlgebraPtr A, std::size_t d) {
    return {ClassKind::PdAtMost, std::move(A), d, {}, {}};
  }
  static ClassDescriptor right_orth_of(AlgebraPtr A, std::vector<Module> gens) {
    return {ClassKind::RightOrthOf, std::move(A), 0, std::move(gens), {}};
  }
  static ClassDescriptor left_orth_of(AlgebraPtr A, std::vector<Module> gens) {
    return {ClassKind::LeftOrthOf, std::move(A), 0, std::move(gens), {}};
  }
  static ClassDescriptor gorenstein_projective(AlgebraPtr A, std::size_t d, FamilySpec f = {}) {
    return {ClassKind::GorensteinProjective, std::move(A), d, {}, std::move(f)};
  }
  static ClassDescriptor explicit_members(AlgebraPtr A, std::vector<Module> ms) {
    return {ClassKind::Explicit, std::move(A), 0, std::move(ms), {}};
  }

  std::string name() const;
};

/// Explicit membership is equality of canonical forms.
Verdict class_member(const ClassDescriptor& c, const Module& M);

struct OrthogonalityCell {
  std::size_t d_index = 0, e_index = 0, degree = 1;
  std::string d_name, e_name;
  Vec orders;
  std::string structure;
  bool pass() const { return orders.empty(); }
};
struct OrthogonalityReport {
  std::size_t i_max = 1;
  std::vector<OrthogonalityCell> cells;
  bool all_zero() const;
  std::optional<OrthogonalityCell> first_failure() const;
};
OrthogonalityReport check_orthogonality(const std::vector<Module>& Dfam, const std::vector<Module>& Efam,
                                        std::size_t i_max = 1);

enum class Side { Left, Right };
/// Members X of the universe with Ext^1(G, X) = 0 (Right) or Ext^1(X, G) = 0
/// (Left) for every generator G, in universe order.
std::vector<Module> orthogonal_closure(const std::vector<Module>& generators, Side side,
                                       const std::vector<Module>& universe);

enum class PrecoverProvider { None, FreePresentation, Identity, GorensteinSyzygy };
enum class PreenvelopeProvider { None, Identity, InjectiveHull, GorensteinPushout };

struct CotorsionPair {
  ClassDescriptor left, right;
  PrecoverProvider precover = PrecoverProvider::None;
  PreenvelopeProvider preenvelope = PreenvelopeProvider::None;
  std::string name() const;
};

/// (Projectives, All) with free presentations and identity preenvelopes.
CotorsionPair projective_pair(const AlgebraPtr& A);
/// (All, Injectives): identity precovers; injective hulls need a field base
/// or a group algebra with base-free input.
CotorsionPair injective_pair(const AlgebraPtr& A);
/// (GP, PdAtMost(d)) over a group algebra.
CotorsionPair gorenstein_pair(const AlgebraPtr& A, std::size_t d, FamilySpec f = {});

enum class ApproxSide { Precover, Preenvelope };
struct Membership {
  std::string what;  // e.g. "left term in Projectives"
  Verdict verdict;
};
struct ApproxSES {
  SES ses;
  ApproxSide side = ApproxSide::Precover;
  std::vector<Membership> memberships;
};

/// 0 -> E -> D -> X -> 0 with D in left, E in right (verified).
ApproxSES special_precover(const CotorsionPair& pair, const Module& X);
/// 0 -> X -> E -> D -> 0 with E in right, D in left (verified).
ApproxSES special_preenvelope(const CotorsionPair& pair, const Module& X);

/// M -> A (x) M, m -> sum_g g (x) g^{-1} m, into the module induced from the
/// underlying base module of M (free when M is base-free).
Morphism coinduction_embedding(const Module& M);

struct RetractDatum {
  Morphism i, r;  // r i = id
};
struct ThickSample {
  std::vector<SES> sequences;
  std::vector<RetractDatum> retracts;
};
/// Split sequences, sequences from sampled monos and epis between catalog
/// members (small multiples of Hom basis elements, in order), and retracts
/// of pairwise sums.
ThickSample thick_sample(const std::vector<Module>& catalog, std::uint64_t seed, std::size_t random_maps = 2);

struct ThickReport {
  std::size_t sequences_checked = 0, retracts_checked = 0;
  bool pass = true;
  std::string certificate;  // first failing sequence or retract
  std::optional<SES> counterexample;
};
ThickReport is_thick(const ClassDescriptor& W, const ThickSample& sample);

struct HereditaryReport {
  OrthogonalityReport ext_vanishing;
  bool kernels_closed = true, cokernels_closed = true;
  std::size_t epis_checked = 0, monos_checked = 0;
  std::string kernel_certificate, cokernel_certificate;
  bool pass() const { return ext_vanishing.all_zero() && kernels_closed && cokernels_closed; }
};
HereditaryReport is_hereditary(const CotorsionPair& pair, const std::vector<Module>& universe, std::size_t i_max,
                               std::uint64_t seed = 0);

/// Least d <= d_max such that the regular module is of injective dimension d.
/// Field base: by duality, pd of D(A) over the opposite algebra. Integer base:
/// table values for Z and Z[G] (1).
std::optional<std::size_t> ring_injective_dimension(const AlgebraPtr& A, std::size_t d_max);

Verdict gp_test(const Module& M, std::size_t d, const FamilySpec& family = {});
/// d-th syzygy of N: Gorenstein projective over a d-Gorenstein ring.
Module gp_example(const Module& N, std::size_t d);

}  // namespace abmc
