#include "doctest.h"

#include "abmc/cotorsion.hpp"
#include "fixtures.hpp"

using namespace abmc;
using namespace fx;

namespace {

std::vector<Module> f2c2_catalog(std::size_t dim = 4) {
  CatalogBounds b;
  b.max_dim = dim;
  return catalog_modules(F2C2(), b);
}

// Over F2[C2] a module is projective iff it is free: the algebra is local.
bool is_free_oracle(const Module& M) {
  const std::size_t n = M.algebra()->rank();
  return M.gens() % n == 0 && M == free_module(M.algebra(), M.gens() / n);
}

}  // namespace

TEST_CASE("class membership examples") {
  CHECK(class_member(ClassDescriptor::projectives(F2C2()), free_module(F2C2(), 2)).kind == VerdictKind::Yes);
  Verdict v = class_member(ClassDescriptor::right_orth_of(F2C2(), {k2()}), k2());
  CHECK(v.kind == VerdictKind::No);
  CHECK(v.certificate.find("F2") != std::string::npos);
  CHECK(class_member(ClassDescriptor::pd_at_most(ZZ(), 1), zmod(2)).holds());
  CHECK_FALSE(class_member(ClassDescriptor::pd_at_most(ZZ(), 0), zmod(2)).holds());
  CHECK(class_member(ClassDescriptor::zero(ZZ()), zmod(0)).kind == VerdictKind::No);
  CHECK(class_member(ClassDescriptor::explicit_members(ZZ(), {zmod(2)}), zmod(2)).holds());
  CHECK_FALSE(class_member(ClassDescriptor::explicit_members(ZZ(), {zmod(2)}), zmod(3)).holds());
  CHECK_THROWS_AS(class_member(ClassDescriptor::all(ZZ()), k2()), AlgebraMismatch);
}

TEST_CASE("orthogonality matrices") {
  auto frees = {free_module(F2C2(), 1), free_module(F2C2(), 2)};
  CHECK(check_orthogonality(frees, f2c2_catalog(), 2).all_zero());
  CHECK(check_orthogonality({trivial_module(ZC2())}, {free_module(ZC2(), 1)}, 1).all_zero());
  OrthogonalityReport r = check_orthogonality({k2()}, {k2()}, 1);
  REQUIRE(r.first_failure().has_value());
  CHECK(r.first_failure()->degree == 1);
  CHECK(r.first_failure()->structure == "F2^1");
}

TEST_CASE("orthogonal closures over the F2[C2] catalog") {
  auto U = f2c2_catalog();
  CHECK(orthogonal_closure({zero_module(F2C2())}, Side::Right, U).size() == U.size());
  std::vector<Module> expected;
  for (const auto& X : U)
    if (X.is_zero() || is_free_oracle(X)) expected.push_back(X);
  auto right = orthogonal_closure({k2()}, Side::Right, U);
  REQUIRE(right.size() == expected.size());
  for (std::size_t i = 0; i < right.size(); ++i) CHECK(right[i] == expected[i]);
  auto left = orthogonal_closure(U, Side::Left, U);
  REQUIRE(left.size() == expected.size());
  for (std::size_t i = 0; i < left.size(); ++i) CHECK(left[i] == expected[i]);
}

TEST_CASE("orthogonal closure is antitone in the generators") {
  auto U = f2c2_catalog();
  std::vector<Module> gens;
  std::size_t last = U.size() + 1;
  for (const auto& G : U) {
    gens.push_back(G);
    auto c = orthogonal_closure(gens, Side::Right, U);
    CHECK(c.size() <= last);
    last = c.size();
  }
}

TEST_CASE("projective pair approximations") {
  CotorsionPair pp = projective_pair(ZC2());
  for (const auto& M : {trivial_module(ZC2()), trivial_module(ZC2(), 2), sign_module(ZC2(), 3)}) {
    ApproxSES a = special_precover(pp, M);
    CHECK(a.ses.right() == M);
    CHECK(is_projective(a.ses.middle()));
    ApproxSES e = special_preenvelope(pp, M);
    CHECK(e.ses.middle() == M);
    CHECK(e.ses.right().is_zero());
  }
}

TEST_CASE("injective hulls") {
  CotorsionPair ip = injective_pair(F2C2());
  ApproxSES e = special_preenvelope(ip, k2());
  CHECK(e.ses.middle() == free_module(F2C2(), 1));
  CHECK(e.ses.right() == k2());
  for (const auto& M : f2c2_catalog()) {
    ApproxSES a = special_preenvelope(ip, M);
    CHECK(a.ses.left() == M);
    CHECK(is_injective(a.ses.middle()));
    CHECK(special_precover(ip, M).ses.left().is_zero());
  }
  ApproxSES same = special_preenvelope(ip, free_module(F2C2(), 1));
  CHECK(same.ses.right().is_zero());
  CHECK_THROWS_AS(special_preenvelope(injective_pair(ZZ()), zmod(2)), NoProvider);
  auto T = upper_triangular_algebra(F2);
  for (const auto& M : catalog_modules(T, CatalogBounds{3, 4, 256})) {
    ApproxSES a = special_preenvelope(injective_pair(T), M);
    CHECK(a.ses.left() == M);
    CHECK(is_injective(a.ses.middle()));
  }
}

TEST_CASE("coinduction embedding") {
  for (const auto& M : {trivial_module(ZC2()), sign_module(ZC2()), free_module(ZC2(), 1), k2()}) {
    Morphism j = coinduction_embedding(M);
    CHECK(is_mono(j));
    CHECK(is_projective(j.dst()));
    CHECK(cokernel(j).module.is_base_free());
  }
  CHECK_THROWS_AS(coinduction_embedding(trivial_module(ZC2(), 2)), InvalidModule);
}

TEST_CASE("Gorenstein approximations over Z[C2]") {
  CotorsionPair gp = gorenstein_pair(ZC2(), 1);
  for (const auto& X : {trivial_module(ZC2(), 2), sign_module(ZC2(), 3), trivial_module(ZC2())}) {
    ApproxSES a = special_precover(gp, X);
    CHECK(a.ses.right() == X);
    CHECK(gp_test(a.ses.middle(), 1).holds());
    CHECK(proj_dim_at_most(a.ses.left(), 1));
    ApproxSES e = special_preenvelope(gp, X);
    CHECK(e.ses.left() == X);
    CHECK(proj_dim_at_most(e.ses.middle(), 1));
    CHECK(gp_test(e.ses.right(), 1).holds());
  }
}

TEST_CASE("thickness") {
  auto U = f2c2_catalog();
  ThickReport r = is_thick(ClassDescriptor::projectives(F2C2()), thick_sample(U, 1));
  CHECK(r.pass);
  CHECK(r.sequences_checked > 0);
  CHECK(is_thick(ClassDescriptor::all(F2C2()), thick_sample(U, 1)).pass);
  ThickReport z = is_thick(ClassDescriptor::projectives(ZZ()), thick_sample(catalog_modules(ZZ(), {2, 2, 256}), 1));
  CHECK_FALSE(z.pass);
  REQUIRE(z.counterexample.has_value());
  CHECK(ses_string(*z.counterexample) == "0 -> Z -> Z -> Z/2 -> 0");
}

TEST_CASE("hereditary pairs") {
  CHECK(is_hereditary(projective_pair(F2C2()), f2c2_catalog(), 3).pass());
  CatalogBounds b{2, 2, 256};
  HereditaryReport g = is_hereditary(gorenstein_pair(ZC2(), 1), catalog_modules(ZC2(), b), 2);
  CHECK(g.pass());
  std::vector<Module> members{zero_module(ZZ()), zmod(6), zmod(2)};
  CotorsionPair broken{ClassDescriptor::explicit_members(ZZ(), members), ClassDescriptor::all(ZZ()),
                       PrecoverProvider::None, PreenvelopeProvider::None};
  HereditaryReport h = is_hereditary(broken, members, 1);
  CHECK_FALSE(h.kernels_closed);
  CHECK(h.kernel_certificate.find("Z/3") != std::string::npos);
}

TEST_CASE("ring injective dimension") {
  CHECK(ring_injective_dimension(F2C2(), 3) == std::optional<std::size_t>(0));
  CHECK(ring_injective_dimension(upper_triangular_algebra(F2), 3) == std::optional<std::size_t>(1));
  CHECK(ring_injective_dimension(ZC2(), 3) == std::optional<std::size_t>(1));
  // Finite projective dimension forces pd <= 1 over Z[C2].
  for (const auto& M : catalog_modules(ZC2(), CatalogBounds{2, 3, 256}))
    if (proj_dim_at_most(M, 3)) CHECK(proj_dim_at_most(M, 1));
}

TEST_CASE("Gorenstein projective test") {
  Verdict t = gp_test(trivial_module(ZC2()), 1);
  CHECK(t.kind == VerdictKind::YesRelativeToFamily);
  CHECK(t.certificate == "seed 0xc07, 32 modules, cokernels of random monos between frees of rank <= 3");
  CHECK_FALSE(is_projective(trivial_module(ZC2())));
  CHECK(gp_test(free_module(ZC2(), 2), 1).kind == VerdictKind::Yes);
  CHECK(gp_test(trivial_module(ZC2(), 2), 1).kind == VerdictKind::No);
  for (const auto& M : f2c2_catalog()) CHECK(gp_test(M, 0).holds());
  for (const auto& N : {trivial_module(ZC2(), 2), sign_module(ZC2(), 4), trivial_module(ZC2(), 3)})
    CHECK(gp_test(gp_example(N, 1), 1).holds());
  auto W = witness_family(ZC2(), 1, FamilySpec{});
  for (const auto& M : W) CHECK(proj_dim_at_most(M, 1));
}

TEST_CASE("quasi-Frobenius coincidence") {
  for (const auto& M : f2c2_catalog(6)) CHECK(is_projective(M) == is_injective(M));
}
