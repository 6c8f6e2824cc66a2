#include "abmc/model_structure.hpp"

namespace abmc {

namespace {

Verdict about(const std::string& what, Verdict v) {
  if (!v.holds()) v.certificate = what + ": " + v.certificate;
  return v;
}

std::vector<Module> members(const ClassDescriptor& c, const std::vector<Module>& catalog) {
  std::vector<Module> out;
  for (const auto& M : catalog)
    if (class_member(c, M).holds()) out.push_back(M);
  return out;
}

}  // namespace

// ------------------------------------------------------------- construction

ModelStructure make_model_structure(std::string name, StructureKind kind, ClassDescriptor C, ClassDescriptor F,
                                    ClassDescriptor W, CotorsionPair pair_cw_f, CotorsionPair pair_c_fw,
                                    std::vector<Module> catalog, std::uint64_t seed) {
  ModelStructure ms;
  ms.name = std::move(name);
  ms.kind = kind;
  ms.algebra = C.algebra;
  for (const auto* c : {&F, &W, &pair_cw_f.left, &pair_cw_f.right, &pair_c_fw.left, &pair_c_fw.right})
    require_same_algebra(ms.algebra, c->algebra, "make_model_structure");
  ms.C = std::move(C);
  ms.F = std::move(F);
  ms.W = std::move(W);
  ms.pair_cw_f = std::move(pair_cw_f);
  ms.pair_c_fw = std::move(pair_c_fw);
  ms.catalog = std::move(catalog);
  ms.thickness = is_thick(ms.W, thick_sample(ms.catalog, seed, 1));
  if (!ms.thickness.pass) throw ThicknessFailed(ms.thickness.certificate);
  ms.orth_cw_f =
      check_orthogonality(members(ms.pair_cw_f.left, ms.catalog), members(ms.pair_cw_f.right, ms.catalog), 1);
  if (auto bad = ms.orth_cw_f.first_failure()) throw OrthogonalityFailed(*bad);
  ms.orth_c_fw =
      check_orthogonality(members(ms.pair_c_fw.left, ms.catalog), members(ms.pair_c_fw.right, ms.catalog), 1);
  if (auto bad = ms.orth_c_fw.first_failure()) throw OrthogonalityFailed(*bad);
  return ms;
}

ModelStructure quasi_frobenius_structure(const AlgebraPtr& A, const std::vector<Module>& catalog) {
  CotorsionPair all_proj{ClassDescriptor::all(A), ClassDescriptor::projectives(A), PrecoverProvider::Identity,
                         PreenvelopeProvider::InjectiveHull};
  return make_model_structure("QF(" + A->name() + ")", StructureKind::QuasiFrobenius, ClassDescriptor::all(A),
                              ClassDescriptor::all(A), ClassDescriptor::projectives(A), projective_pair(A), all_proj,
                              catalog);
}

ModelStructure gorenstein_projective_structure(const AlgebraPtr& A, const std::vector<Module>& catalog,
                                               FamilySpec family) {
  auto d = ring_injective_dimension(A, 4);
  if (!d) throw UnsupportedAlgebra(A->name() + " has no finite self-injective dimension up to 4");
  CotorsionPair gp = gorenstein_pair(A, *d, family);
  return make_model_structure("Gorenstein-projective(" + A->name() + ")", StructureKind::GorensteinProjective,
                              gp.left, ClassDescriptor::all(A), gp.right, projective_pair(A), gp, catalog);
}

ModelStructure gorenstein_injective_structure(const AlgebraPtr& A, const std::vector<Module>& catalog) {
  if (!A->base().is_field())
    throw UnsupportedAlgebra("the Gorenstein-injective structure over " + A->name() +
                             " needs injective modules that are not finitely generated");
  if (!A->is_group_algebra())
    throw UnsupportedAlgebra("the Gorenstein-injective structure is only provided over group algebras");
  CotorsionPair all_proj{ClassDescriptor::all(A), ClassDescriptor::projectives(A), PrecoverProvider::Identity,
                         PreenvelopeProvider::InjectiveHull};
  return make_model_structure("Gorenstein-injective(" + A->name() + ")", StructureKind::GorensteinInjective,
                              ClassDescriptor::all(A), ClassDescriptor::all(A), ClassDescriptor::projectives(A),
                              projective_pair(A), all_proj, catalog);
}

Verdict member_c(const ModelStructure& ms, const Module& X) { return class_member(ms.C, X); }
Verdict member_f(const ModelStructure& ms, const Module& X) { return class_member(ms.F, X); }
Verdict member_w(const ModelStructure& ms, const Module& X) { return class_member(ms.W, X); }

// ------------------------------------------------------------- map classes

MapClass classify_map(const ModelStructure& ms, const Morphism& f, bool with_weak_equivalence) {
  require_same_algebra(ms.algebra, f.src().algebra(), "classify_map");
  MapClass mc;
  if (is_mono(f)) {
    Module Q = cokernel(f).module;
    mc.cofibration = about("cokernel " + display_name(Q), member_c(ms, Q));
    mc.acyclic_cofibration = both(mc.cofibration, about("cokernel " + display_name(Q), member_w(ms, Q)));
  } else {
    mc.cofibration = Verdict::no("not a monomorphism: kernel " + kernel(f).module.structure_string());
    mc.acyclic_cofibration = mc.cofibration;
  }
  if (is_epi(f)) {
    Module K = kernel(f).module;
    mc.fibration = about("kernel " + display_name(K), member_f(ms, K));
    mc.acyclic_fibration = both(mc.fibration, about("kernel " + display_name(K), member_w(ms, K)));
  } else {
    mc.fibration = Verdict::no("not an epimorphism: cokernel " + cokernel(f).module.structure_string());
    mc.acyclic_fibration = mc.fibration;
  }
  if (with_weak_equivalence) mc.weak_equivalence = is_weak_equivalence(ms, f).verdict;
  return mc;
}

std::string mode_string(FactorMode m) {
  return m == FactorMode::CofThenAcyFib ? "CofThenAcyFib" : "AcyCofThenFib";
}

// ---------------------------------------------------------- factorization

namespace {

struct Pieces {
  Morphism first, second;
};

// f mono: pull the precover of coker f back along B -> coker f.
Pieces mono_case(const CotorsionPair& pair, const Morphism& f) {
  Cokernel c = cokernel(f);
  ApproxSES a = special_precover(pair, c.module);
  Pullback P = pullback(c.projection, a.ses.p);
  Morphism first = pullback_factor(P, f, Morphism::zero(f.src(), a.ses.middle()));
  return {first, P.to_x};
}

// f epi: push the preenvelope of ker f out along ker f -> A.
Pieces epi_case(const CotorsionPair& pair, const Morphism& f) {
  Kernel k = kernel(f);
  ApproxSES e = special_preenvelope(pair, k.module);
  Pushout Q = pushout(k.inclusion, e.ses.i);
  Morphism second = pushout_factor(Q, f, Morphism::zero(e.ses.middle(), f.dst()));
  return {Q.from_x, second};
}

}  // namespace

Factorization factorize(const ModelStructure& ms, const Morphism& f, FactorMode mode) {
  require_same_algebra(ms.algebra, f.src().algebra(), "factorize");
  const CotorsionPair& pair = mode == FactorMode::CofThenAcyFib ? ms.pair_c_fw : ms.pair_cw_f;
  Factorization out;
  out.mode = mode;
  Pieces p;
  if (is_mono(f)) {
    out.route = "mono";
    p = mono_case(pair, f);
  } else if (is_epi(f)) {
    out.route = "epi";
    p = epi_case(pair, f);
  } else {
    // A -> A + B -> B, then refactor the composite monomorphism.
    out.route = "general";
    Biproduct b = direct_sum(f.src(), f.dst());
    Morphism m = pair_into(b, Morphism::identity(f.src()), f);
    Pieces e = epi_case(pair, b.pr2);
    Pieces g = mono_case(pair, compose(e.first, m));
    p = {g.first, compose(e.second, g.second)};
  }
  out.first = p.first;
  out.second = p.second;
  if (compose(out.second, out.first) != f) throw AbmcError("factorization does not compose to the input map");
  if (!is_mono(out.first)) throw ProviderFailed("factorization", "first map is not a monomorphism");
  if (!is_epi(out.second)) throw ProviderFailed("factorization", "second map is not an epimorphism");
  Module Q = cokernel(out.first).module, K = kernel(out.second).module;
  Verdict a = class_member(pair.left, Q), c = class_member(pair.right, K);
  out.verification.push_back({"cokernel of the first map in " + pair.left.name(), a});
  out.verification.push_back({"kernel of the second map in " + pair.right.name(), c});
  if (!a.holds()) throw ProviderFailed("factorization", "cokernel " + display_name(Q) + ": " + a.certificate);
  if (!c.holds()) throw ProviderFailed("factorization", "kernel " + display_name(K) + ": " + c.certificate);
  return out;
}

// ------------------------------------------------------------------ lifting

Lift lift(const ModelStructure& ms, const LiftProblem& q) {
  const Module &A = q.i.src(), &B = q.i.dst(), &E = q.p.src(), &X = q.p.dst();
  if (q.top.src() != A || q.top.dst() != E || q.bottom.src() != B || q.bottom.dst() != X)
    throw LiftPrecondition("square has mismatched corners");
  if (compose(q.p, q.top) != compose(q.bottom, q.i)) throw LiftPrecondition("square does not commute");
  MapClass ci = classify_map(ms, q.i), cp = classify_map(ms, q.p);
  Lift out;
  if (ci.acyclic_cofibration.holds() && cp.fibration.holds()) {
    out.hypothesis = "acyclic cofibration against fibration";
  } else if (ci.cofibration.holds() && cp.acyclic_fibration.holds()) {
    out.hypothesis = "cofibration against acyclic fibration";
  } else {
    throw LiftPrecondition("legs are not a cofibration and a fibration with one of them acyclic");
  }
  HomGroup hbe = hom_group(B, E), hae = hom_group(A, E), hbx = hom_group(B, X);
  auto stack = [](Vec a, const Vec& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  std::vector<Vec> cols;
  for (const auto& b : hbe.basis())
    cols.push_back(stack(hae.coordinates(compose(b, q.i)), hbx.coordinates(compose(q.p, b))));
  Vec target = stack(hae.coordinates(q.top), hbx.coordinates(q.bottom));
  auto x = solve_in_group(A.base(), cols, target, stack(hae.orders(), hbx.orders()));
  if (!x) throw NotLiftable("no lift for a square with " + out.hypothesis);
  out.h = hbe.element(*x);
  if (compose(out.h, q.i) != q.top || compose(q.p, out.h) != q.bottom)
    throw AbmcError("lift fails a triangle identity");
  return out;
}

WeakEquivalence is_weak_equivalence(const ModelStructure& ms, const Morphism& f) {
  WeakEquivalence w;
  w.factorization = factorize(ms, f, FactorMode::CofThenAcyFib);
  Module Q = cokernel(w.factorization.first).module;
  w.verdict = about("cokernel " + display_name(Q) + " of the cofibration part", member_w(ms, Q));
  return w;
}

// --------------------------------------------------------------- stable hom

StableHom stable_hom(const ModelStructure& ms, const Module& M, const Module& N) {
  if (ms.kind == StructureKind::Custom) throw UnsupportedAlgebra("stable_hom needs a preset model structure");
  require_same_algebra(ms.algebra, M.algebra(), "stable_hom");
  require_same_algebra(ms.algebra, N.algebra(), "stable_hom");
  StableHom s;
  s.hom = hom_group(M, N);
  const SES& cover = resolution_of(N)->stage(0);
  HomGroup to_free = hom_group(M, cover.middle());
  const std::size_t n = s.hom.size();
  std::vector<Vec> cols;
  for (const auto& a : to_free.basis()) {
    Morphism g = compose(cover.p, a);
    if (g.is_zero()) continue;
    s.projective_factoring.push_back(g);
    cols.push_back(s.hom.coordinates(g));
  }
  for (std::size_t t = 0; t < n; ++t)
    if (sgn(s.hom.orders()[t]) != 0) {
      Vec v(n);
      v[t] = s.hom.orders()[t];
      cols.push_back(v);
    }
  Mat rel(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) rel.set_col(c, cols[c]);
  s.orders = present(M.base(), n, rel).orders;
  s.structure = abelian_group_string(M.base(), s.orders);
  return s;
}

// ---------------------------------------------------------------- monoidal

Morphism pushout_product(const Morphism& i, const Morphism& j) {
  const Module &A = i.src(), &B = i.dst(), &C = j.src(), &D = j.dst();
  TensorProduct ac = tensor_diagonal(A, C), ad = tensor_diagonal(A, D), bc = tensor_diagonal(B, C),
                bd = tensor_diagonal(B, D);
  Morphism f1 = tensor_morphisms(ac, ad, Morphism::identity(A), j);
  Morphism f2 = tensor_morphisms(ac, bc, i, Morphism::identity(C));
  Pushout Q = pushout(f1, f2);
  Morphism a = tensor_morphisms(ad, bd, i, Morphism::identity(D));
  Morphism b = tensor_morphisms(bc, bd, Morphism::identity(B), j);
  return pushout_factor(Q, a, b);
}

bool MonoidalReport::pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

MonoidalReport monoidal_check(const ModelStructure& ms, const std::vector<Module>& catalog, std::uint64_t seed) {
  MonoidalReport r;
  std::vector<Module> cof = members(ms.C, catalog);
  std::vector<Module> acyc;
  for (const auto& X : cof)
    if (member_w(ms, X).holds()) acyc.push_back(X);

  ConditionReport flat{"every cofibrant object is flat", true, 0, "", ""};
  if (ms.algebra->base().is_field()) {
    flat.note = "automatic: the tensor product is taken over a field";
  } else {
    flat.note = "tensoring sampled short exact sequences";
    std::vector<Module> small(catalog.begin(), catalog.begin() + std::min<std::size_t>(catalog.size(), 5));
    ThickSample sample = thick_sample(small, seed, 0);
    for (const auto& X : cof) {
      for (std::size_t t = 0; t < sample.sequences.size() && t < 16; ++t) {
        const SES& s = sample.sequences[t];
        TensorProduct xa = tensor_diagonal(X, s.left()), xb = tensor_diagonal(X, s.middle()),
                      xc = tensor_diagonal(X, s.right());
        Morphism ti = tensor_morphisms(xa, xb, Morphism::identity(X), s.i);
        Morphism tp = tensor_morphisms(xb, xc, Morphism::identity(X), s.p);
        ++flat.checked;
        if (auto bad = ses_defect(ti, tp); bad && flat.pass) {
          flat.pass = false;
          flat.certificate = display_name(X) + " (x) (" + ses_string(s) + ") is not exact: " + *bad;
        }
      }
    }
  }
  r.conditions.push_back(flat);

  ConditionReport closed{"cofibrant (x) cofibrant is cofibrant", true, 0, "", ""};
  ConditionReport acyclic{"cofibrant (x) acyclic cofibrant is acyclic", true, 0, "", ""};
  for (const auto& X : cof)
    for (const auto& Y : cof) {
      Module T = tensor_diagonal(X, Y).module;
      ++closed.checked;
      Verdict v = member_c(ms, T);
      if (!v.holds() && closed.pass) {
        closed.pass = false;
        closed.certificate = display_name(X) + " (x) " + display_name(Y) + ": " + v.certificate;
      }
    }
  for (const auto& X : cof)
    for (const auto& Y : acyc) {
      Module T = tensor_diagonal(X, Y).module;
      ++acyclic.checked;
      Verdict v = member_w(ms, T);
      if (!v.holds() && acyclic.pass) {
        acyclic.pass = false;
        acyclic.certificate = display_name(X) + " (x) " + display_name(Y) + ": " + v.certificate;
      }
    }
  r.conditions.push_back(closed);
  r.conditions.push_back(acyclic);

  ConditionReport unit{"the unit is cofibrant", true, 1, "", ""};
  Verdict u = member_c(ms, tensor_unit(ms.algebra));
  if (!u.holds()) {
    unit.pass = false;
    unit.certificate = "unit: " + u.certificate;
  }
  r.conditions.push_back(unit);
  return r;
}

}  // namespace abmc
