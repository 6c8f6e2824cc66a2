#pragma once

#include <random>

#include "abmc/module_cat.hpp"

namespace fx {

using namespace abmc;

inline const BaseRing Z = BaseRing::integers();
inline const BaseRing F2 = BaseRing::prime_field(2);

inline AlgebraPtr ZZ() {
  static AlgebraPtr a = base_algebra(Z);
  return a;
}
inline AlgebraPtr F2C2() {
  static AlgebraPtr a = cyclic_group_algebra(F2, 2);
  return a;
}
inline AlgebraPtr ZC2() {
  static AlgebraPtr a = cyclic_group_algebra(Z, 2);
  return a;
}

// Z/n (n = 0 gives Z) over the integers.
inline Module zmod(long n) { return trivial_module(ZZ(), n); }

inline Module zsum(std::initializer_list<long> parts) {
  std::vector<Module> ms;
  for (long n : parts) ms.push_back(zmod(n));
  return direct_sum_all(ms, ZZ());
}

inline Morphism zmap(const Module& src, const Module& dst, std::vector<std::vector<long>> rows) {
  return Morphism(src, dst, Mat::from_rows(rows, src.gens()));
}

inline Module k2() { return trivial_module(F2C2()); }

inline Int draw(std::mt19937_64& rng, long lo, long hi) {
  return Int(lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1)));
}

inline Vec random_element(std::mt19937_64& rng, const Module& N, long bound = 3) {
  Vec v(N.gens());
  for (auto& e : v) e = draw(rng, -bound, bound);
  return N.reduce(v);
}

inline Morphism random_from_free(std::mt19937_64& rng, const Module& N, std::size_t r) {
  Module F = free_module(N.algebra(), r);
  std::vector<Vec> images;
  for (std::size_t s = 0; s < r; ++s) images.push_back(random_element(rng, N));
  return free_map(F, N, images);
}

}  // namespace fx

#include "abmc/homological.hpp"

namespace fx {

inline Morphism random_hom(std::mt19937_64& rng, const Module& M, const Module& N, long bound = 3) {
  HomGroup H = hom_group(M, N);
  Vec c(H.size());
  for (auto& e : c) e = draw(rng, -bound, bound);
  return H.element(c);
}

// Closed-form Ext^1 over Z between finitely generated abelian groups:
// Ext(Z/a, Z/b) = Z/gcd(a,b), Ext(Z/a, Z) = Z/a, Ext(Z, -) = 0.
inline Vec ext1_over_z_oracle(const Module& M, const Module& N) {
  std::vector<long> parts;
  for (const auto& a : M.orders()) {
    if (sgn(a) == 0) continue;
    for (const auto& b : N.orders()) parts.push_back(sgn(b) == 0 ? a.get_si() : Int(gcd(a, b)).get_si());
  }
  Mat rel(parts.size(), parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) rel(i, i) = parts[i];
  return present(Z, parts.size(), rel).orders;
}

}  // namespace fx
