#include "doctest.h"

#include <numeric>

#include "abmc/model_structure.hpp"
#include "fixtures.hpp"

using namespace abmc;
using namespace fx;

namespace {

std::vector<Module> f2c2_catalog() { return catalog_modules(F2C2(), CatalogBounds{4, 4, 256}); }
std::vector<Module> zc2_catalog() { return catalog_modules(ZC2(), CatalogBounds{2, 2, 256}); }

const ModelStructure& qf() {
  static ModelStructure ms = quasi_frobenius_structure(F2C2(), f2c2_catalog());
  return ms;
}

const ModelStructure& gor() {
  static ModelStructure ms = gorenstein_projective_structure(ZC2(), zc2_catalog());
  return ms;
}

Morphism hull(const Module& M) { return special_preenvelope(injective_pair(F2C2()), M).ses.i; }

// All integer matrices with entries in [-b, b] that are module maps.
std::vector<Mat> enumerate_maps(const Module& M, const Module& N, long b) {
  std::vector<Mat> out;
  const std::size_t vars = M.gens() * N.gens();
  std::vector<long> cur(vars, -b);
  while (true) {
    Mat m(N.gens(), M.gens());
    for (std::size_t v = 0; v < vars; ++v) m(v / M.gens(), v % M.gens()) = cur[v];
    if (!morphism_defect(M, N, m)) out.push_back(m);
    std::size_t v = 0;
    while (v < vars && cur[v] == b) cur[v++] = -b;
    if (v == vars) break;
    ++cur[v];
  }
  return out;
}

}  // namespace

TEST_CASE("preset construction") {
  CHECK(qf().name == "QF(F2[C2])");
  CHECK(qf().thickness.pass);
  CHECK(qf().orth_cw_f.all_zero());
  CHECK(qf().orth_c_fw.all_zero());
  try {
    quasi_frobenius_structure(ZZ(), catalog_modules(ZZ(), CatalogBounds{2, 2, 256}));
    FAIL("QF structure over Z must fail");
  } catch (const ThicknessFailed& e) {
    CHECK(e.certificate().find("0 -> Z -> Z -> Z/2 -> 0") == 0);
  }
  CHECK(gor().name == "Gorenstein-projective(Z[C2])");
  CHECK(gor().W.d == 1);
  CHECK_THROWS_AS(gorenstein_injective_structure(ZC2(), zc2_catalog()), UnsupportedAlgebra);
  CHECK(gorenstein_injective_structure(F2C2(), f2c2_catalog()).thickness.pass);
}

TEST_CASE("map classes") {
  for (const auto& M : f2c2_catalog()) {
    MapClass c = classify_map(qf(), Morphism::identity(M), true);
    CHECK(c.cofibration.holds());
    CHECK(c.acyclic_cofibration.holds());
    CHECK(c.fibration.holds());
    CHECK(c.acyclic_fibration.holds());
    CHECK(c.weak_equivalence->holds());
  }
  MapClass k = classify_map(qf(), hull(k2()));
  CHECK(k.cofibration.holds());
  CHECK_FALSE(k.acyclic_cofibration.holds());
  Module P = free_module(F2C2(), 1);
  MapClass z = classify_map(qf(), Morphism::zero(P, zero_module(F2C2())));
  CHECK(z.acyclic_fibration.holds());
}

TEST_CASE("factorization examples") {
  Factorization f = factorize(qf(), Morphism::zero(k2(), zero_module(F2C2())), FactorMode::CofThenAcyFib);
  CHECK(f.route == "epi");
  CHECK(f.first.dst() == free_module(F2C2(), 1));
  CHECK(f.second.dst().is_zero());
  Module M = direct_sum(k2(), free_module(F2C2(), 1)).sum;
  Factorization g = factorize(qf(), Morphism::zero(zero_module(F2C2()), M), FactorMode::CofThenAcyFib);
  CHECK(g.first.dst() == M);
  CHECK(g.second == Morphism::identity(M));
  for (auto mode : {FactorMode::CofThenAcyFib, FactorMode::AcyCofThenFib}) {
    Factorization h = factorize(qf(), Morphism::identity(M), mode);
    CHECK(compose(h.second, h.first) == Morphism::identity(M));
  }
}

TEST_CASE("seeded factorizations compose exactly") {
  std::mt19937_64 rng(31);
  for (const ModelStructure* ms : {&qf(), &gor()}) {
    const auto& cat = ms->catalog;
    for (int t = 0; t < 12; ++t) {
      const Module& M = cat[rng() % cat.size()];
      const Module& N = cat[rng() % cat.size()];
      Morphism f = random_hom(rng, M, N);
      for (auto mode : {FactorMode::CofThenAcyFib, FactorMode::AcyCofThenFib}) {
        Factorization fz = factorize(*ms, f, mode);
        CHECK(compose(fz.second, fz.first) == f);
        MapClass a = classify_map(*ms, fz.first), b = classify_map(*ms, fz.second);
        if (mode == FactorMode::CofThenAcyFib) {
          CHECK(a.cofibration.holds());
          CHECK(b.acyclic_fibration.holds());
        } else {
          CHECK(a.acyclic_cofibration.holds());
          CHECK(b.fibration.holds());
        }
      }
    }
  }
}

TEST_CASE("lifting") {
  Module P = free_module(F2C2(), 1);
  Module Z0 = zero_module(F2C2());
  // k -> F2[C2] against P -> 0: extends any k -> P.
  Morphism i = hull(k2());
  for (const auto& top : hom_group(k2(), P).basis()) {
    LiftProblem q{i, Morphism::zero(P, Z0), top, Morphism::zero(i.dst(), Z0)};
    Lift l = lift(qf(), q);
    CHECK(compose(l.h, i) == top);
  }
  // 0 -> F against an epi.
  Module F2m = free_module(F2C2(), 2);
  Morphism p = resolution_of(k2())->stage(0).p;
  std::mt19937_64 rng(3);
  Morphism bottom = random_hom(rng, F2m, k2());
  LiftProblem q{Morphism::zero(Z0, F2m), p, Morphism::zero(Z0, p.src()), bottom};
  Lift l = lift(qf(), q);
  CHECK(compose(p, l.h) == bottom);
  LiftProblem bad{i, Morphism::identity(i.dst()), Morphism::zero(k2(), i.dst()), Morphism::identity(i.dst())};
  CHECK_THROWS_AS(lift(qf(), bad), LiftPrecondition);
}

TEST_CASE("weak equivalences") {
  Module P = free_module(F2C2(), 1);
  CHECK(is_weak_equivalence(qf(), Morphism::identity(k2())).verdict.holds());
  Biproduct b = direct_sum(k2(), P);
  CHECK(is_weak_equivalence(qf(), b.in1).verdict.holds());
  CHECK_FALSE(is_weak_equivalence(qf(), Morphism::zero(zero_module(F2C2()), k2())).verdict.holds());
  CHECK(is_weak_equivalence(gor(), Morphism::zero(trivial_module(ZC2()), zero_module(ZC2()))).verdict.holds() ==
        false);
  CHECK(is_weak_equivalence(gor(), Morphism::zero(free_module(ZC2(), 1), zero_module(ZC2()))).verdict.holds());
}

TEST_CASE("stable hom over Z[C2] against enumerated composites") {
  Module T = trivial_module(ZC2());
  StableHom s = stable_hom(gor(), T, T);
  CHECK(s.hom.orders() == Vec{0});
  CHECK(s.orders == Vec{2});
  // Oracle: gcd of all composites T -> Z[C2] -> T with small entries.
  Module F = free_module(ZC2(), 1);
  long g = 0;
  for (const auto& a : enumerate_maps(T, F, 3))
    for (const auto& b : enumerate_maps(F, T, 3)) g = std::gcd(g, (b * a)(0, 0).get_si());
  CHECK(g == 2);
}

TEST_CASE("stable hom examples") {
  CHECK(stable_hom(qf(), k2(), k2()).orders.size() == 1);
  for (const auto& M : f2c2_catalog()) CHECK(stable_hom(qf(), free_module(F2C2(), 1), M).orders.empty());
  std::mt19937_64 rng(5);
  for (const auto& M : f2c2_catalog())
    for (const auto& N : f2c2_catalog()) {
      Module MP = direct_sum(M, free_module(F2C2(), 1)).sum;
      CHECK(stable_hom(qf(), MP, N).orders == stable_hom(qf(), M, N).orders);
    }
}

TEST_CASE("projective-factoring maps factor through the free cover") {
  std::mt19937_64 rng(8);
  for (const ModelStructure* ms : {&qf(), &gor()}) {
    const auto& cat = ms->catalog;
    for (int t = 0; t < 10; ++t) {
      const Module& M = cat[rng() % cat.size()];
      const Module& N = cat[rng() % cat.size()];
      Module P = free_module(ms->algebra, 2);
      Morphism h = compose(random_hom(rng, P, N), random_hom(rng, M, P));
      StableHom s = stable_hom(*ms, M, N);
      std::vector<Vec> cols;
      for (const auto& g : s.projective_factoring) cols.push_back(s.hom.coordinates(g));
      CHECK(solve_in_group(M.base(), cols, s.hom.coordinates(h), s.hom.orders()).has_value());
    }
  }
}

TEST_CASE("pushout products") {
  Module Z0 = zero_module(F2C2());
  Morphism z = Morphism::zero(Z0, k2());
  Morphism pp = pushout_product(z, z);
  CHECK(pp.src().is_zero());
  CHECK(pp.dst() == k2());
  Morphism i = hull(k2());
  CHECK(is_iso(pushout_product(Morphism::identity(k2()), i)));
  CHECK(classify_map(qf(), pushout_product(i, i)).cofibration.holds());
}

TEST_CASE("monoidal conditions") {
  MonoidalReport r = monoidal_check(qf(), f2c2_catalog());
  CHECK(r.pass());
  CHECK(r.conditions.size() == 4);
  ModelStructure odd = qf();
  odd.kind = StructureKind::Custom;
  odd.C = ClassDescriptor::explicit_members(F2C2(), {free_module(F2C2(), 1)});
  MonoidalReport bad = monoidal_check(odd, f2c2_catalog());
  CHECK_FALSE(bad.conditions[3].pass);
  MonoidalReport g = monoidal_check(gor(), zc2_catalog());
  CHECK(g.conditions[0].checked > 0);
}
