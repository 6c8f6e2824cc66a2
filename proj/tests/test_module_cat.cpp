#include "doctest.h"

#include "fixtures.hpp"

using namespace abmc;
using namespace fx;

namespace {

std::size_t field_rank(const BaseRing& R, const Mat& m) { return column_echelon(R, m).rank(); }

bool same_structure(const Module& a, const Module& b) { return a.orders() == b.orders(); }

}  // namespace

TEST_CASE("algebras are validated at construction") {
  AlgebraPtr A = F2C2();
  CHECK(A->rank() == 2);
  CHECK(A->is_group_algebra());
  CHECK(A->name() == "F2[C2]");
  CHECK(A->generators() == std::vector<std::size_t>{1});
  AlgebraPtr Zr = make_algebra(Z, {{Vec{1}}}, Vec{1});
  CHECK(Zr->rank() == 1);
  CHECK_THROWS_AS(make_algebra(Z, {{Vec{0}}}, Vec{1}), AlgebraError);
  // Z[x]/(x^2 - x - 1)
  std::vector<std::vector<Vec>> golden{{Vec{1, 0}, Vec{0, 1}}, {Vec{0, 1}, Vec{1, 1}}};
  CHECK_NOTHROW(make_algebra(Z, golden, Vec{1, 0}));
  // b0 b1 = b1 but b1 b0 = 0: b0 is not a two-sided unit
  std::vector<std::vector<Vec>> one_sided{{Vec{1, 0}, Vec{0, 1}}, {Vec{0, 0}, Vec{0, 0}}};
  CHECK_THROWS_AS(make_algebra(Z, one_sided, Vec{1, 0}), AlgebraError);
  std::vector<std::vector<Vec>> broken{{Vec{0, 1}, Vec{1, 0}}, {Vec{1, 0}, Vec{1, 0}}};
  CHECK_THROWS_AS(make_algebra(Z, broken, Vec{1, 0}), AlgebraError);
  AlgebraPtr T = upper_triangular_algebra(F2);
  CHECK(T->rank() == 3);
}

TEST_CASE("free modules") {
  Module F = free_module(F2C2(), 1);
  CHECK(F.gens() == 2);
  CHECK(F.orders() == Vec{0, 0});
  Module Zf = free_module(ZZ(), 1);
  CHECK(Zf == zmod(0));
  Module F2Z = free_module(ZC2(), 2);
  CHECK(F2Z.gens() == 4);
  CHECK_NOTHROW(Module::from_canonical(ZC2(), F2Z.orders(), F2Z.actions()));
  CHECK(F2Z.action(1) == Mat::from_rows({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}));
}

TEST_CASE("modules are brought to canonical form") {
  Module m = make_module(ZZ(), 2, Mat::from_rows({{2, 0}, {0, 3}}), {Mat::identity(2)});
  CHECK(m.orders() == Vec{6});
  CHECK(m.structure_string() == "Z/6");
  CHECK_THROWS_AS(Module::from_canonical(ZZ(), Vec{0, 2}, {Mat::identity(2)}), InvalidModule);
  // g acting by 2 on Z is not an involution
  CHECK_THROWS_AS(make_module(ZC2(), 1, Mat(0, 1), {Mat::identity(1), Mat::from_rows({{2}})}), InvalidModule);
  // action not preserving relations: Z^2/(2,0) with swap
  CHECK_THROWS_AS(make_module(ZC2(), 2, Mat::from_rows({{2, 0}}), {Mat::identity(2), Mat::from_rows({{0, 1}, {1, 0}})}),
                  InvalidModule);
}

TEST_CASE("kernels") {
  Module Zm = zmod(0);
  CHECK(kernel(zmap(Zm, Zm, {{2}})).module.is_zero());
  Module F = free_module(F2C2(), 1);
  Morphism aug(F, k2(), Mat::from_rows({{1, 1}}));
  Kernel K = kernel(aug);
  REQUIRE(K.module.gens() == 1);
  CHECK(K.inclusion.matrix() == Mat::from_rows({{1}, {1}}));
  CHECK(K.module == k2());
  CHECK(kernel(Morphism::identity(F)).module.is_zero());
}

TEST_CASE("cokernels") {
  Module Zm = zmod(0);
  CHECK(cokernel(zmap(Zm, Zm, {{2}})).module.orders() == Vec{2});
  Module M = zsum({2, 0});
  CHECK(cokernel(Morphism::zero(zero_module(ZZ()), M)).module == M);
  Morphism socle(k2(), free_module(F2C2(), 1), Mat::from_rows({{1}, {1}}));
  Cokernel C = cokernel(socle);
  CHECK(C.module == k2());
}

TEST_CASE("direct sums") {
  Module M = zsum({2, 0});
  CHECK(direct_sum(M, zero_module(ZZ())).sum == M);
  CHECK(direct_sum(zmod(2), zmod(4)).sum.orders() == Vec{2, 4});
  CHECK(direct_sum(zmod(2), zmod(3)).sum.orders() == Vec{6});
  Biproduct b = direct_sum(k2(), free_module(F2C2(), 1));
  CHECK(compose(b.pr1, b.in1) == Morphism::identity(k2()));
  CHECK(compose(b.pr2, b.in2) == Morphism::identity(free_module(F2C2(), 1)));
  CHECK(compose(b.pr1, b.in2).is_zero());
  CHECK(compose(b.pr2, b.in1).is_zero());
  Biproduct c = direct_sum(zmod(2), zmod(3));
  CHECK(compose(c.pr1, c.in1) == Morphism::identity(zmod(2)));
  CHECK(compose(c.pr2, c.in1).is_zero());
  CHECK(compose(c.in1, c.pr1) + compose(c.in2, c.pr2) == Morphism::identity(c.sum));
}

TEST_CASE("pullbacks") {
  Module Zm = zmod(0), Z2 = zmod(2);
  Morphism g = zmap(Zm, Z2, {{1}});
  Pullback P = pullback(Morphism::identity(Z2), g);
  CHECK(same_structure(P.module, Zm));
  Pullback Q = pullback(g, g);
  CHECK(Q.module.orders() == Vec{0, 0});
  CHECK(compose(g, Q.to_x) == compose(g, Q.to_y));
  Morphism f = zmap(Zm, Z2, {{1}});
  Pullback R = pullback(f, Morphism::zero(zero_module(ZZ()), Z2));
  CHECK(same_structure(R.module, kernel(f).module));
}

TEST_CASE("pushouts") {
  Module Zm = zmod(0);
  Morphism g = zmap(Zm, zmod(3), {{1}});
  Pushout P = pushout(Morphism::identity(Zm), g);
  CHECK(same_structure(P.module, zmod(3)));
  Pushout Q = pushout(zmap(Zm, Zm, {{2}}), Morphism::zero(Zm, zero_module(ZZ())));
  CHECK(Q.module.orders() == Vec{2});
  Module X = zsum({2, 0}), Y = free_module(ZZ(), 1);
  Module O = zero_module(ZZ());
  Pushout R = pushout(Morphism::zero(O, X), Morphism::zero(O, Y));
  CHECK(same_structure(R.module, direct_sum(X, Y).sum));
}

TEST_CASE("universal factorizations") {
  Module Zm = zmod(0);
  Morphism two = zmap(Zm, Zm, {{2}});
  Cokernel C = cokernel(two);
  Morphism h = zmap(Zm, zmod(4), {{2}});
  Morphism u = descend(C, h);
  CHECK(compose(u, C.projection) == h);
  Morphism red = zmap(Zm, zmod(2), {{1}});
  Kernel K = kernel(red);
  Morphism four = zmap(Zm, Zm, {{4}});
  Morphism v = lift_into_kernel(K, four);
  CHECK(compose(K.inclusion, v) == four);
  CHECK_FALSE(factor_through_mono(K.inclusion, Morphism::identity(Zm)).has_value());
}

TEST_CASE("exactness sanity on random maps") {
  std::mt19937_64 rng(41);
  std::vector<Module> targets{k2(), free_module(F2C2(), 1), direct_sum(k2(), free_module(F2C2(), 1)).sum,
                              trivial_module(ZC2()), sign_module(ZC2()), free_module(ZC2(), 1), trivial_module(ZC2(), 4),
                              zsum({2, 4, 0}), zsum({3, 0, 0})};
  for (int trial = 0; trial < 60; ++trial) {
    const Module& N = targets[trial % targets.size()];
    Morphism f = random_from_free(rng, N, 1 + rng() % 2);
    Kernel K = kernel(f);
    CHECK(compose(f, K.inclusion).is_zero());
    CHECK(is_mono(K.inclusion));
    Cokernel C = cokernel(f);
    CHECK(compose(C.projection, f).is_zero());
    CHECK(is_epi(C.projection));
    CHECK_FALSE(ses_defect(K.inclusion, image(f).corestriction).has_value());
    Kernel KK = kernel(cokernel(K.inclusion).projection);
    CHECK(same_structure(KK.module, K.module));
    Image I = image(f);
    CHECK(compose(I.inclusion, I.corestriction) == f);
    // Pullback of the epi onto the image along the inclusion of the image is epi.
    Pullback P = pullback(I.corestriction, Morphism::identity(I.module));
    CHECK(is_epi(P.to_y));
    Pushout Q = pushout(K.inclusion, K.inclusion);
    CHECK(is_mono(Q.from_y));
    CHECK(compose(Q.from_x, K.inclusion) == compose(Q.from_y, K.inclusion));
  }
}

TEST_CASE("pushout of a mono is mono, pullback of an epi is epi") {
  std::mt19937_64 rng(43);
  Module F = free_module(F2C2(), 1);
  for (int trial = 0; trial < 20; ++trial) {
    Morphism f = random_from_free(rng, F, 2);
    Kernel K = kernel(f);
    Morphism h = Morphism::zero(K.module, k2());
    Pushout Q = pushout(K.inclusion, h);
    CHECK(is_mono(Q.from_y));
    Cokernel C = cokernel(f);
    Pullback P = pullback(C.projection, Morphism::zero(zero_module(F2C2()), C.module));
    CHECK(is_epi(P.to_y));
  }
}

TEST_CASE("short exact sequences are validated") {
  Module Zm = zmod(0);
  Morphism two = zmap(Zm, Zm, {{2}});
  CHECK_NOTHROW(make_ses(two, zmap(Zm, zmod(2), {{1}})));
  CHECK_THROWS_AS(make_ses(two, zmap(Zm, zmod(4), {{1}})), InvalidMorphism);
  CHECK_THROWS_AS(make_ses(zmap(Zm, Zm, {{4}}), zmap(Zm, zmod(2), {{1}})), InvalidMorphism);
}

TEST_CASE("tensor products") {
  Module F = free_module(F2C2(), 1);
  std::vector<Module> ms{k2(), F, direct_sum(k2(), F).sum};
  for (const auto& M : ms) {
    TensorProduct t = tensor_diagonal(k2(), M);
    CHECK(t.module == M);
  }
  CHECK(tensor_diagonal(zmod(2), zmod(3)).module.is_zero());
  CHECK(tensor_diagonal(zmod(4), zmod(6)).module.orders() == Vec{2});
  // Free F2[C2]-modules are exactly those on which 1+g has rank dim/2.
  Vec one_plus_g{1, 1};
  for (const auto& M : ms) {
    Module T = tensor_diagonal(F, M).module;
    CHECK(T.gens() == 2 * M.gens());
    CHECK(2 * field_rank(F2, T.act(one_plus_g)) == T.gens());
  }
  std::vector<Module> zs{trivial_module(ZC2()), sign_module(ZC2()), free_module(ZC2(), 1), trivial_module(ZC2(), 2),
                         sign_module(ZC2(), 4)};
  for (const auto& a : zs)
    for (const auto& b : zs) CHECK(tensor_diagonal(a, b).module.orders() == tensor_diagonal(b, a).module.orders());
  CHECK_THROWS_AS(tensor_diagonal(free_module(upper_triangular_algebra(F2), 1), free_module(upper_triangular_algebra(F2), 1)),
                  UnsupportedAlgebra);
}

TEST_CASE("tensoring morphisms") {
  Module F = free_module(F2C2(), 1);
  Morphism aug(F, k2(), Mat::from_rows({{1, 1}}));
  TensorProduct a = tensor_diagonal(F, F), b = tensor_diagonal(k2(), F);
  Morphism t = tensor_morphisms(a, b, aug, Morphism::identity(F));
  CHECK_FALSE(morphism_defect(t.src(), t.dst(), t.matrix()).has_value());
  CHECK(is_epi(t));
}

TEST_CASE("purity") {
  Module Zm = zmod(0);
  SES s = make_ses(zmap(Zm, Zm, {{2}}), zmap(Zm, zmod(2), {{1}}));
  PurityReport r = is_pure(s);
  CHECK_FALSE(r.pure);
  CHECK(r.witness == "Z/2");
  CHECK(is_pure(split_ses(zmod(2), zmod(0))).pure);
  CHECK(is_pure(split_ses(zmod(4), zmod(6))).pure);
  // 0 -> Z/2 -> Z/4 -> Z/2 -> 0 is not pure
  SES t = make_ses(zmap(zmod(2), zmod(4), {{2}}), zmap(zmod(4), zmod(2), {{1}}));
  CHECK_FALSE(is_pure(t).pure);
}

TEST_CASE("duals over the opposite algebra") {
  AlgebraPtr T = upper_triangular_algebra(F2);
  AlgebraPtr Top = opposite_algebra(T);
  Module P = free_module(T, 1);
  Module D = dual_module(P, Top);
  CHECK_NOTHROW(Module::from_canonical(Top, D.orders(), D.actions()));
}
