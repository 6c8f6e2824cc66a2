#pragma once

// Bounded chain complexes, chain maps and homotopies, the tilde and
// dg-tilde classes of a cotorsion pair, and Ext^1 in the category of
// complexes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abmc/cotorsion.hpp"

namespace abmc {

class InvalidComplex : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

/// Entries X_lo..X_hi (zero outside) with d_n : X_n -> X_{n-1}.
class ChainComplex {
 public:
  ChainComplex() = default;
  /// diffs[k] is d_{lo+k+1}; validates d d = 0.
  ChainComplex(AlgebraPtr A, int lo, std::vector<Module> entries, std::vector<Morphism> diffs,
               std::string label = "");
  static ChainComplex zero(AlgebraPtr A);

  const AlgebraPtr& algebra() const { return algebra_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(entries_.size()) - 1; }
  bool empty_window() const { return entries_.empty(); }
  const Module& entry(int n) const;
  Morphism d(int n) const;
  const std::string& label() const { return label_; }
  ChainComplex with_label(std::string label) const;
  std::size_t max_entry_gens() const;
  std::string describe() const;

 private:
  AlgebraPtr algebra_;
  int lo_ = 0;
  std::vector<Module> entries_;
  std::vector<Morphism> diffs_;
  Module zero_;
  std::string label_;
};

/// Degreewise maps commuting with the differentials.
struct ChainMap {
  ChainComplex src, dst;
  std::map<int, Morphism> comp;
  Morphism at(int n) const;
  bool is_zero() const;
};
ChainMap make_chain_map(ChainComplex src, ChainComplex dst, std::map<int, Morphism> comp);
ChainMap compose(const ChainMap& g, const ChainMap& f);

/// s_n : X_n -> Y_{n+1}.
struct ChainHomotopy {
  ChainComplex src, dst;
  std::map<int, Morphism> s;
  Morphism at(int n) const;
};
/// d s + s d.
ChainMap homotopy_boundary(const ChainHomotopy& h);

ChainComplex disk(int n, const Module& A);
ChainComplex sphere(int n, const Module& A);
/// (Sigma X)_n = X_{n-1}, differential -d.
ChainComplex suspension(const ChainComplex& X);
ChainComplex chain_sum(const ChainComplex& X, const ChainComplex& Y);

Module cycles(const ChainComplex& X, int n);
Module boundaries(const ChainComplex& X, int n);
Module homology(const ChainComplex& X, int n);
bool is_exact(const ChainComplex& X);

/// Group of chain maps X -> Y as a subgroup of the product of the degreewise
/// Hom groups.
class ChainHomGroup {
 public:
  ChainHomGroup(ChainComplex X, ChainComplex Y);
  const std::vector<ChainMap>& basis() const& { return basis_; }
  std::vector<ChainMap> basis() && { return std::move(basis_); }
  const Vec& orders() const { return orders_; }
  std::size_t size() const { return basis_.size(); }
  Vec coordinates(const ChainMap& f) const;
  ChainMap element(const Vec& c) const;

 private:
  ChainComplex X_, Y_;
  int lo_ = 0, hi_ = -1;
  std::vector<HomGroup> degree_;  // Hom(X_n, Y_n), n = lo..hi
  std::vector<ChainMap> basis_;
  Vec orders_, amb_orders_;
  Mat inclusion_;
  std::shared_ptr<const CongruenceSolver> solver_;
  Vec flat(const ChainMap& f) const;
};

std::optional<ChainHomotopy> null_homotopy(const ChainMap& f);

enum class ChainExtRoute { Auto, Resolution, HomotopyClasses, DiskReduction };
std::string route_string(ChainExtRoute r);

struct ChainExt {
  Vec orders;
  std::string structure;
  ChainExtRoute route = ChainExtRoute::Auto;
  bool is_zero() const { return orders.empty(); }
};
/// Ext^1(Y, X) in bounded complexes. Resolution: through the cover of Y by
/// disks on free modules. HomotopyClasses: maps Y -> Sigma X up to homotopy
/// (needs every Ext^1(Y_n, X_n) = 0). DiskReduction: X = D^{n+1}A gives
/// Ext^1(Y_n, A). Auto picks the disk reduction for disks, then
/// homotopy classes when admissible, then the resolution.
ChainExt chain_ext1(const ChainComplex& Y, const ChainComplex& X, ChainExtRoute route = ChainExtRoute::Auto);

enum class ChainVariant { TildeD, TildeE, DgTildeD, DgTildeE, Exact };
std::string variant_string(ChainVariant v);

struct ChainClassSpec {
  CotorsionPair base;
  ChainVariant variant = ChainVariant::TildeD;
  std::vector<ChainComplex> witnesses;  // members of the opposite tilde class
  std::string family;
};

Verdict tilde_member(const ChainClassSpec& spec, const ChainComplex& X);
Verdict dg_member(const ChainClassSpec& spec, const ChainComplex& X);
Verdict chain_member(const ChainClassSpec& spec, const ChainComplex& X);

struct ComplexBounds {
  std::size_t max_entry_dim = 3;
  std::size_t max_length = 4;
  std::size_t random_count = 16;
};
struct ComplexEntry {
  ChainComplex complex;
  std::string provenance;
};
/// Disks and spheres on catalog modules, exact three-term complexes from
/// sampled short exact sequences, and seeded random complexes in degrees
/// 0..max_length-1.
std::vector<ComplexEntry> complex_catalog(const AlgebraPtr& A, const ComplexBounds& bounds, std::uint64_t seed);

struct InducedPairReport {
  std::string family;
  std::size_t catalog_size = 0;
  std::size_t tilde_d = 0, tilde_e = 0, dg_d = 0, dg_e = 0, exact = 0;
  // (a)
  std::size_t ext_cells = 0;
  bool orthogonality = true;
  std::string orthogonality_certificate;
  // (b)
  bool compatibility = true;
  bool compatibility_asserted = true;
  std::string compatibility_certificate;
  // (c)
  HereditaryReport hereditary;
  bool pass() const { return orthogonality && hereditary.pass() && (compatibility || !compatibility_asserted); }
};
InducedPairReport verify_induced_pair(const CotorsionPair& base, const std::vector<ComplexEntry>& catalog,
                                      const std::vector<Module>& module_universe);

struct ChainSES {
  ChainMap i, p;
};
struct ChainApprox {
  ChainMap cover;       // A -> X, A a sum of disks on free modules
  ChainComplex kernel;  // K
  ChainSES embedding;   // 0 -> K -> E -> D' -> 0, E a sum of disks
  ChainSES result;      // 0 -> E -> Q -> X -> 0
  std::vector<Membership> memberships;
  std::string route;
};
/// The pushout construction: cover X by disks, embed the kernel into a sum
/// of disks on the base pair's preenvelopes, push out. Q must land in
/// dg-tilde-D and E in tilde-E; throws ProviderFailed otherwise.
ChainApprox chain_enough_injectives_pushout(const CotorsionPair& base, const ChainComplex& X,
                                            const std::vector<ChainComplex>& witnesses, bool quick_path = true);

}  // namespace abmc
