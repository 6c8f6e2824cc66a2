#include "abmc/cotorsion.hpp"

#include <cstdio>
#include <map>
#include <mutex>

namespace abmc {

namespace {

std::string module_key(const Module& M) {
  std::string k = std::to_string(reinterpret_cast<std::uintptr_t>(M.algebra().get())) + "|";
  for (const auto& o : M.orders()) k += o.get_str() + ",";
  for (const Mat& a : M.actions()) {
    k += "|";
    for (const auto& e : a.entries()) k += e.get_str() + ",";
  }
  return k;
}

std::string names(const std::vector<Module>& ms) {
  std::string s = "{";
  for (std::size_t i = 0; i < ms.size(); ++i) s += (i ? ", " : "") + display_name(ms[i]);
  return s + "}";
}

}  // namespace

std::string display_name(const Module& M) { return M.label().empty() ? M.structure_string() : M.label(); }

std::string ses_string(const SES& s) {
  return "0 -> " + display_name(s.left()) + " -> " + display_name(s.middle()) + " -> " + display_name(s.right()) +
         " -> 0";
}

std::string verdict_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Yes:
      return "Yes";
    case VerdictKind::No:
      return "No";
    default:
      return "YesRelativeToFamily";
  }
}

Verdict both(const Verdict& a, const Verdict& b) {
  if (!a.holds()) return a;
  if (!b.holds()) return b;
  if (a.kind == VerdictKind::YesRelativeToFamily) return a;
  return b;
}

// ------------------------------------------------------------------ classes

std::string FamilySpec::describe() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%#llx", static_cast<unsigned long long>(seed));
  return "seed " + std::string(buf) + ", " + std::to_string(size) + " modules, " + rule;
}

std::vector<Module> witness_family(const AlgebraPtr& A, std::size_t d, const FamilySpec& spec) {
  static std::mutex mu;
  static std::map<std::string, std::pair<AlgebraPtr, std::vector<Module>>> cache;
  const std::string key = std::to_string(reinterpret_cast<std::uintptr_t>(A.get())) + "|" + std::to_string(d) +
                          "|" + std::to_string(spec.max_rank) + "|" + spec.describe();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.second;
  }
  std::vector<Module> out;
  auto add = [&](const Module& M) {
    for (const auto& x : out)
      if (x == M) return;
    out.push_back(M);
  };
  Rng rng(spec.seed);
  std::size_t made = 0;
  for (std::size_t attempt = 0; made < spec.size && attempt < 16 * spec.size; ++attempt) {
    const auto r2 = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(spec.max_rank)));
    const auto r1 = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(r2)));
    Module F1 = free_module(A, r1), F2 = free_module(A, r2);
    std::vector<Vec> images;
    for (std::size_t s = 0; s < r1; ++s) {
      Vec v(F2.gens());
      for (auto& e : v) e = rng.uniform(-2, 2);
      images.push_back(F2.reduce(v));
    }
    Morphism f = free_map(F1, F2, images);
    if (!is_mono(f)) continue;
    ++made;
    Module C = cokernel(f).module;
    add(C.with_label("coker(" + display_name(F1) + " -> " + display_name(F2) + ")#" + std::to_string(made)));
  }
  add(free_module(A, 1));
  CatalogBounds b;
  b.max_dim = std::min<std::size_t>(A->rank(), max_dim_cap());
  b.max_factor = 3;
  for (const auto& M : catalog_modules(A, b))
    if (!M.is_zero() && proj_dim_at_most(M, d)) add(M);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, std::make_pair(A, out));
  return out;
}

std::string ClassDescriptor::name() const {
  switch (kind) {
    case ClassKind::All:
      return "All";
    case ClassKind::Zero:
      return "Zero";
    case ClassKind::Projectives:
      return "Projectives";
    case ClassKind::Injectives:
      return "Injectives";
    case ClassKind::PdAtMost:
      return "PdAtMost(" + std::to_string(d) + ")";
    case ClassKind::RightOrthOf:
      return "RightOrthOf" + names(modules);
    case ClassKind::LeftOrthOf:
      return "LeftOrthOf" + names(modules);
    case ClassKind::GorensteinProjective:
      return "GorensteinProjective(" + std::to_string(d) + ")";
    case ClassKind::Explicit:
      return "Explicit" + names(modules);
  }
  return "?";
}

Verdict class_member(const ClassDescriptor& c, const Module& M) {
  require_same_algebra(c.algebra, M.algebra(), "class_member");
  switch (c.kind) {
    case ClassKind::All:
      return Verdict::yes();
    case ClassKind::Zero:
      return M.is_zero() ? Verdict::yes() : Verdict::no(display_name(M) + " is nonzero");
    case ClassKind::Projectives:
      return is_projective(M) ? Verdict::yes()
                              : Verdict::no("free presentation of " + display_name(M) + " does not split");
    case ClassKind::Injectives:
      if (is_injective(M)) return Verdict::yes();
      return Verdict::no(M.base().is_field() ? "dual of " + display_name(M) + " is not projective"
                                             : display_name(M) + " is nonzero and not divisible");
    case ClassKind::PdAtMost:
      return proj_dim_at_most(M, c.d) ? Verdict::yes()
                                      : Verdict::no("syzygy " + std::to_string(c.d) + " of " + display_name(M) +
                                                    " is not projective");
    case ClassKind::RightOrthOf:
      for (const auto& G : c.modules) {
        ExtGroup g = ext(G, M, 1);
        if (!g.is_zero())
          return Verdict::no("Ext^1(" + display_name(G) + ", " + display_name(M) + ") = " + g.structure_string());
      }
      return Verdict::yes();
    case ClassKind::LeftOrthOf:
      for (const auto& G : c.modules) {
        ExtGroup g = ext(M, G, 1);
        if (!g.is_zero())
          return Verdict::no("Ext^1(" + display_name(M) + ", " + display_name(G) + ") = " + g.structure_string());
      }
      return Verdict::yes();
    case ClassKind::GorensteinProjective:
      return gp_test(M, c.d, c.family);
    case ClassKind::Explicit:
      for (const auto& X : c.modules)
        if (X == M) return Verdict::yes();
      return Verdict::no(display_name(M) + " is not among the listed members");
  }
  return Verdict::yes();
}

// ------------------------------------------------------------ orthogonality

bool OrthogonalityReport::all_zero() const {
  for (const auto& c : cells)
    if (!c.pass()) return false;
  return true;
}

std::optional<OrthogonalityCell> OrthogonalityReport::first_failure() const {
  for (const auto& c : cells)
    if (!c.pass()) return c;
  return std::nullopt;
}

OrthogonalityReport check_orthogonality(const std::vector<Module>& Dfam, const std::vector<Module>& Efam,
                                        std::size_t i_max) {
  if (i_max == 0) throw AbmcError("check_orthogonality needs i_max >= 1");
  OrthogonalityReport r;
  r.i_max = i_max;
  for (std::size_t a = 0; a < Dfam.size(); ++a)
    for (std::size_t b = 0; b < Efam.size(); ++b)
      for (std::size_t i = 1; i <= i_max; ++i) {
        ExtGroup g = ext(Dfam[a], Efam[b], i);
        r.cells.push_back({a, b, i, display_name(Dfam[a]), display_name(Efam[b]), g.orders(), g.structure_string()});
      }
  return r;
}

std::vector<Module> orthogonal_closure(const std::vector<Module>& generators, Side side,
                                       const std::vector<Module>& universe) {
  std::vector<Module> out;
  for (const auto& X : universe) {
    bool ok = true;
    for (const auto& G : generators) {
      const bool zero = side == Side::Right ? ext(G, X, 1).is_zero() : ext(X, G, 1).is_zero();
      if (!zero) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(X);
  }
  return out;
}

// ---------------------------------------------------------------- providers

std::string CotorsionPair::name() const { return "(" + left.name() + ", " + right.name() + ")"; }

CotorsionPair projective_pair(const AlgebraPtr& A) {
  return {ClassDescriptor::projectives(A), ClassDescriptor::all(A), PrecoverProvider::FreePresentation,
          PreenvelopeProvider::Identity};
}

CotorsionPair injective_pair(const AlgebraPtr& A) {
  const bool hull = A->base().is_field() || A->is_group_algebra();
  return {ClassDescriptor::all(A), ClassDescriptor::injectives(A), PrecoverProvider::Identity,
          hull ? PreenvelopeProvider::InjectiveHull : PreenvelopeProvider::None};
}

CotorsionPair gorenstein_pair(const AlgebraPtr& A, std::size_t d, FamilySpec f) {
  if (!A->is_group_algebra()) throw UnsupportedAlgebra("the Gorenstein providers need a group algebra");
  return {ClassDescriptor::gorenstein_projective(A, d, std::move(f)), ClassDescriptor::pd_at_most(A, d),
          PrecoverProvider::GorensteinSyzygy, PreenvelopeProvider::GorensteinPushout};
}

Morphism coinduction_embedding(const Module& M) {
  const AlgebraPtr& A = M.algebra();
  if (!A->is_group_algebra()) throw UnsupportedAlgebra("coinduction needs a group algebra");
  if (!M.is_base_free()) throw InvalidModule("coinduction embedding needs a base-free module, got " + M.describe());
  const std::size_t n = A->rank(), m = M.gens();
  Module F = free_module(A, m);
  const auto& inv = A->group()->inverse;
  Mat mat(n * m, m);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t g = 0; g < n; ++g) {
      const Mat& act = M.action(inv[g]);
      for (std::size_t s = 0; s < m; ++s) mat(s * n + g, t) = act(s, t);
    }
  return Morphism(M, F, F.reduce_rows(mat));
}

namespace {

SES identity_precover(const Module& X) {
  return SES{Morphism::zero(zero_module(X.algebra()), X), Morphism::identity(X)};
}

SES identity_preenvelope(const Module& X) {
  return SES{Morphism::identity(X), Morphism::zero(X, zero_module(X.algebra()))};
}

SES injective_hull(const Module& X) {
  if (X.is_zero()) return identity_preenvelope(X);
  const AlgebraPtr& A = X.algebra();
  if (A->base().is_field()) {
    // Free cover of the dual, dualized back.
    AlgebraPtr op = cached_opposite(A);
    Module DX = dual_module(X, op);
    const SES& cover = resolution_of(DX)->stage(0);
    Module DF = dual_module(cover.middle(), A);
    Morphism j(X, DF, cover.p.matrix().transpose());
    return ses_from_mono(j);
  }
  throw NoProvider("no finitely generated injective modules over " + A->name());
}

SES gorenstein_preenvelope(const Module& X, std::size_t level);

SES gorenstein_precover(const Module& X, std::size_t level) {
  if (level == 0) return identity_precover(X);
  SES stage = resolution_of(X)->stage(0);
  SES env = gorenstein_preenvelope(stage.left(), level - 1);
  Pushout P = pushout(stage.i, env.i);
  Morphism p = pushout_factor(P, stage.p, Morphism::zero(env.middle(), X));
  return SES{P.from_y, p};
}

SES gorenstein_preenvelope(const Module& X, std::size_t level) {
  if (level == 0) return ses_from_mono(coinduction_embedding(X));
  SES cover = gorenstein_precover(X, level);
  Morphism j = coinduction_embedding(cover.middle());
  Pushout Q = pushout(j, cover.p);
  return ses_from_mono(Q.from_y);
}

void verify(const SES& s, const ClassDescriptor& left_class, const Module& left_obj, const std::string& left_role,
            const ClassDescriptor& right_class, const Module& right_obj, const std::string& right_role,
            const std::string& stage, ApproxSES& out) {
  if (auto bad = ses_defect(s.i, s.p)) throw ProviderFailed(stage, "sequence is not exact: " + *bad);
  Verdict a = class_member(left_class, left_obj);
  out.memberships.push_back({left_role + " in " + left_class.name(), a});
  if (!a.holds()) throw ProviderFailed(stage, ses_string(s) + ": " + a.certificate);
  Verdict b = class_member(right_class, right_obj);
  out.memberships.push_back({right_role + " in " + right_class.name(), b});
  if (!b.holds()) throw ProviderFailed(stage, ses_string(s) + ": " + b.certificate);
}

}  // namespace

ApproxSES special_precover(const CotorsionPair& pair, const Module& X) {
  require_same_algebra(pair.left.algebra, X.algebra(), "special_precover");
  ApproxSES out;
  out.side = ApproxSide::Precover;
  std::string stage;
  switch (pair.precover) {
    case PrecoverProvider::None:
      throw NoProvider("no precover provider for " + pair.name());
    case PrecoverProvider::FreePresentation:
      out.ses = resolution_of(X)->stage(0);
      stage = "free presentation";
      break;
    case PrecoverProvider::Identity:
      out.ses = identity_precover(X);
      stage = "identity precover";
      break;
    case PrecoverProvider::GorensteinSyzygy:
      if (class_member(pair.left, X).holds()) {
        out.ses = identity_precover(X);
        stage = "identity precover";
      } else {
        try {
          out.ses = gorenstein_precover(X, pair.left.d);
        } catch (const InvalidModule& e) {
          throw ProviderFailed("syzygy pushout", e.what());
        }
        stage = "syzygy pushout";
      }
      break;
  }
  verify(out.ses, pair.left, out.ses.middle(), "middle term", pair.right, out.ses.left(), "left term", stage, out);
  return out;
}

ApproxSES special_preenvelope(const CotorsionPair& pair, const Module& X) {
  require_same_algebra(pair.left.algebra, X.algebra(), "special_preenvelope");
  ApproxSES out;
  out.side = ApproxSide::Preenvelope;
  std::string stage;
  auto right_shortcut = [&] {
    if (pair.right.kind != ClassKind::GorensteinProjective && class_member(pair.right, X).holds()) {
      out.ses = identity_preenvelope(X);
      stage = "identity preenvelope";
      return true;
    }
    return false;
  };
  switch (pair.preenvelope) {
    case PreenvelopeProvider::None:
      throw NoProvider("no preenvelope provider for " + pair.name());
    case PreenvelopeProvider::Identity:
      out.ses = identity_preenvelope(X);
      stage = "identity preenvelope";
      break;
    case PreenvelopeProvider::InjectiveHull:
      if (right_shortcut()) break;
      if (X.base().is_field()) {
        out.ses = injective_hull(X);
        stage = "dual of a free cover";
      } else if (X.algebra()->is_group_algebra() && X.is_base_free()) {
        out.ses = ses_from_mono(coinduction_embedding(X));
        stage = "coinduction embedding";
      } else {
        throw NoProvider("no finitely generated injective hull of " + display_name(X) + " over " +
                         X.algebra()->name());
      }
      break;
    case PreenvelopeProvider::GorensteinPushout:
      if (right_shortcut()) break;
      try {
        out.ses = gorenstein_preenvelope(X, pair.left.d);
      } catch (const InvalidModule& e) {
        throw ProviderFailed("precover pushout", e.what());
      }
      stage = "precover pushout";
      break;
  }
  verify(out.ses, pair.left, out.ses.right(), "right term", pair.right, out.ses.middle(), "middle term", stage, out);
  return out;
}

// ---------------------------------------------------------------- thickness

ThickSample thick_sample(const std::vector<Module>& catalog, std::uint64_t seed, std::size_t random_maps) {
  ThickSample s;
  Rng rng(seed);
  for (const auto& M : catalog)
    for (const auto& N : catalog) {
      if (M.is_zero() || N.is_zero()) continue;
      HomGroup H = hom_group(M, N);
      std::vector<Morphism> maps;
      const long top = M.base().is_field() ? 1 : 2;
      for (const auto& b : H.basis())
        for (long c = 1; c <= top; ++c) maps.push_back(b.scaled(c));
      for (std::size_t t = 0; t < random_maps && !H.is_zero(); ++t) maps.push_back(random_morphism(rng, H, 2));
      for (const auto& f : maps) {
        if (f.is_zero()) continue;
        if (is_mono(f)) {
          s.sequences.push_back(ses_from_mono(f));
        } else if (is_epi(f)) {
          s.sequences.push_back(ses_from_epi(f));
        } else {
          Image I = image(f);
          s.sequences.push_back(ses_from_mono(I.inclusion));
          s.sequences.push_back(ses_from_epi(I.corestriction));
        }
      }
      s.sequences.push_back(split_ses(M, N));
      Biproduct b = direct_sum(M, N);
      s.retracts.push_back({b.in1, b.pr1});
    }
  return s;
}

ThickReport is_thick(const ClassDescriptor& W, const ThickSample& sample) {
  ThickReport r;
  std::map<std::string, Verdict> memo;
  auto in_w = [&](const Module& M) {
    const std::string k = module_key(M);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    Verdict v = class_member(W, M);
    memo.emplace(k, v);
    return v;
  };
  for (const auto& s : sample.sequences) {
    ++r.sequences_checked;
    Verdict a = in_w(s.left()), b = in_w(s.middle()), c = in_w(s.right());
    const int count = a.holds() + b.holds() + c.holds();
    if (count == 2 && r.pass) {
      const Verdict& bad = !a.holds() ? a : !b.holds() ? b : c;
      r.pass = false;
      r.certificate = ses_string(s) + " has two terms in " + W.name() + " but " + bad.certificate;
      r.counterexample = s;
    }
  }
  for (const auto& d : sample.retracts) {
    ++r.retracts_checked;
    if (compose(d.r, d.i) != Morphism::identity(d.i.src())) throw InvalidMorphism("retract datum has r i != id");
    if (r.pass && in_w(d.i.dst()).holds()) {
      Verdict v = in_w(d.i.src());
      if (!v.holds()) {
        r.pass = false;
        r.certificate = display_name(d.i.src()) + " is a retract of " + display_name(d.i.dst()) + " in " +
                        W.name() + " but " + v.certificate;
      }
    }
  }
  return r;
}

HereditaryReport is_hereditary(const CotorsionPair& pair, const std::vector<Module>& universe, std::size_t i_max,
                               std::uint64_t seed) {
  HereditaryReport r;
  std::vector<Module> L, R;
  for (const auto& M : universe) {
    if (class_member(pair.left, M).holds()) L.push_back(M);
    if (class_member(pair.right, M).holds()) R.push_back(M);
  }
  r.ext_vanishing = check_orthogonality(L, R, i_max);
  Rng rng(seed);
  auto sample_maps = [&](const Module& X, const Module& Y) {
    HomGroup H = hom_group(X, Y);
    std::vector<Morphism> maps = H.basis();
    if (!H.is_zero()) maps.push_back(random_morphism(rng, H, 2));
    return maps;
  };
  for (const auto& X : L)
    for (const auto& Y : L)
      for (const auto& f : sample_maps(X, Y)) {
        if (!is_epi(f)) continue;
        ++r.epis_checked;
        Module K = kernel(f).module;
        Verdict v = class_member(pair.left, K);
        if (!v.holds() && r.kernels_closed) {
          r.kernels_closed = false;
          r.kernel_certificate = "kernel " + display_name(K) + " of the epimorphism " + display_name(X) + " -> " +
                                 display_name(Y) + " " + f.matrix().to_string() + ": " + v.certificate;
        }
      }
  for (const auto& X : R)
    for (const auto& Y : R)
      for (const auto& f : sample_maps(X, Y)) {
        if (!is_mono(f)) continue;
        ++r.monos_checked;
        Module C = cokernel(f).module;
        Verdict v = class_member(pair.right, C);
        if (!v.holds() && r.cokernels_closed) {
          r.cokernels_closed = false;
          r.cokernel_certificate = "cokernel " + display_name(C) + " of the monomorphism " + display_name(X) +
                                   " -> " + display_name(Y) + " " + f.matrix().to_string() + ": " + v.certificate;
        }
      }
  return r;
}

// ---------------------------------------------------------------- Gorenstein

std::optional<std::size_t> ring_injective_dimension(const AlgebraPtr& A, std::size_t d_max) {
  if (A->base().is_field()) {
    Module DA = dual_module(free_module(A, 1), cached_opposite(A));
    for (std::size_t d = 0; d <= d_max; ++d)
      if (proj_dim_at_most(DA, d)) return d;
    return std::nullopt;
  }
  // Z and Z[G] for finite G are 1-Gorenstein.
  if (A->rank() == 1 || A->is_group_algebra()) {
    if (d_max >= 1) return 1;
    return std::nullopt;
  }
  throw UnsupportedAlgebra("no injective dimension entry for " + A->name() + " over the integers");
}

Verdict gp_test(const Module& M, std::size_t d, const FamilySpec& family) {
  static std::mutex mu;
  static std::map<std::string, Verdict> memo;
  const std::string key = module_key(M) + "#" + std::to_string(d) + "#" + family.describe();
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  Verdict v;
  if (M.is_zero() || is_projective(M)) {
    v = Verdict::yes();
  } else {
    v = Verdict::relative(family.describe());
    for (const auto& W : witness_family(M.algebra(), d, family)) {
      ExtGroup g = ext(M, W, 1);
      if (!g.is_zero()) {
        v = Verdict::no("Ext^1(" + display_name(M) + ", " + display_name(W) + ") = " + g.structure_string());
        break;
      }
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  if (memo.size() > 8192) memo.clear();
  memo.emplace(key, v);
  return v;
}

Module gp_example(const Module& N, std::size_t d) { return syzygy(N, d); }

}  // namespace abmc
