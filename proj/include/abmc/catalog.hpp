#pragma once

// Deterministic module universes for property sweeps, and seeded sampling.

#include <cstdint>
#include <string>
#include <vector>

#include "abmc/homological.hpp"

namespace abmc {

class CatalogTooLarge : public AbmcError {
 public:
  using AbmcError::AbmcError;
};

struct CatalogBounds {
  std::size_t max_dim = 4;     // base generators per module
  long max_factor = 4;         // torsion orders / coefficient box
  std::size_t max_entries = 256;
};

struct CatalogEntry {
  Module module;
  std::string provenance;
};

/// Hard cap on max_dim: ABMC_MAX_DIM if set, otherwise 8.
std::size_t max_dim_cap();

/// Over Z: every canonical group with invariant factors <= max_factor and at
/// most max_dim generators. Over F_p: F_p^d. Otherwise: seeds (free module,
/// trivial and sign modules, cyclic quotients A/Aa) and all direct sums of
/// seeds up to max_dim, deduplicated by canonical form. Order is
/// deterministic; provenance records the construction.
std::vector<CatalogEntry> module_catalog(const AlgebraPtr& A, const CatalogBounds& bounds);
std::vector<Module> catalog_modules(const AlgebraPtr& A, const CatalogBounds& bounds);

/// Portable deterministic generator (the standard distributions are not
/// specified bit-for-bit, so draws are made from the raw engine).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  long uniform(long lo, long hi);
  std::size_t index(std::size_t n);
  bool coin() { return (next() & 1) != 0; }
  std::uint64_t seed_for(std::uint64_t stream);

 private:
  std::uint64_t state_;
};

Morphism random_morphism(Rng& rng, const HomGroup& H, long coeff_bound = 3);
Morphism random_morphism(Rng& rng, const Module& M, const Module& N, long coeff_bound = 3);

}  // namespace abmc
