#include "abmc/homological.hpp"

#include <map>
#include <mutex>

namespace abmc {

namespace {

Vec flatten(const Mat& m) { return m.entries(); }

Mat unflatten(const Vec& v, std::size_t rows, std::size_t cols) { return Mat(rows, cols, v); }

bool all_zero_mod(const BaseRing& R, const Vec& v, const Vec& orders) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!R.is_zero(R.reduce_mod(v[i], orders[i]))) return false;
  return true;
}

std::string module_key(const Module& M) {
  std::string key = std::to_string(reinterpret_cast<std::uintptr_t>(M.algebra().get())) + "|";
  for (const auto& d : M.orders()) key += d.get_str() + ",";
  for (const auto& a : M.actions()) {
    key += "|";
    for (const auto& e : a.entries()) key += e.get_str() + ",";
  }
  return key;
}

}  // namespace

// ---------------------------------------------------------------- HomGroup

HomGroup::HomGroup(Module src, Module dst) : src_(std::move(src)), dst_(std::move(dst)) {
  require_same_algebra(src_.algebra(), dst_.algebra(), "hom_group");
  const BaseRing& R = src_.base();
  const std::size_t gM = src_.gens(), gN = dst_.gens(), vars = gM * gN;
  amb_orders_.resize(vars);
  for (std::size_t i = 0; i < gN; ++i)
    for (std::size_t j = 0; j < gM; ++j) amb_orders_[i * gM + j] = dst_.orders()[i];

  std::vector<Vec> rows;
  Vec moduli;
  if (!R.is_field()) {
    for (std::size_t j = 0; j < gM; ++j) {
      if (sgn(src_.orders()[j]) == 0) continue;
      for (std::size_t i = 0; i < gN; ++i) {
        Vec r(vars);
        r[i * gM + j] = src_.orders()[j];
        rows.push_back(std::move(r));
        moduli.push_back(dst_.orders()[i]);
      }
    }
  }
  for (std::size_t k : src_.algebra()->generators()) {
    const Mat& am = src_.action(k);
    const Mat& an = dst_.action(k);
    for (std::size_t i = 0; i < gN; ++i)
      for (std::size_t j = 0; j < gM; ++j) {
        // (h am - an h)_{ij}
        Vec r(vars);
        for (std::size_t l = 0; l < gM; ++l) r[i * gM + l] += am(l, j);
        for (std::size_t l = 0; l < gN; ++l) r[l * gM + j] -= an(i, l);
        rows.push_back(std::move(r));
        moduli.push_back(dst_.orders()[i]);
      }
  }
  Mat phi(rows.size(), vars);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < vars; ++c) phi(r, c) = rows[r][c];
  Mat P = rows.empty() ? Mat::identity(vars) : congruence_kernel(R, phi, moduli);
  SubgroupPresentation sub = subgroup_presentation(R, amb_orders_, P);
  orders_ = sub.orders;
  inclusion_ = sub.inclusion;
  for (std::size_t t = 0; t < inclusion_.cols(); ++t)
    basis_.push_back(Morphism::trusted(src_, dst_, unflatten(inclusion_.col(t), gN, gM)));
  if (!basis_.empty()) solver_ = std::make_shared<const CongruenceSolver>(R, inclusion_, amb_orders_);
}

Vec HomGroup::coordinates(const Morphism& f) const {
  if (basis_.empty()) return {};
  auto x = solver_->solve(flatten(f.matrix()));
  if (!x) throw InvalidMorphism("coordinates requested for a map outside the Hom group");
  return reduced_vec(src_.base(), *x, orders_);
}

Morphism HomGroup::element(const Vec& coeffs) const {
  Mat m(dst_.gens(), src_.gens());
  for (std::size_t t = 0; t < basis_.size(); ++t)
    if (!src_.base().is_zero(coeffs[t])) m = m + basis_[t].matrix().scaled(coeffs[t]);
  return Morphism::trusted(src_, dst_, m);
}

HomGroup hom_group(const Module& M, const Module& N) { return HomGroup(M, N); }

std::optional<Vec> solve_in_group(const BaseRing& R, const std::vector<Vec>& columns, const Vec& target,
                                  const Vec& orders) {
  if (target.empty()) return Vec(columns.size());
  Mat F(target.size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) F.set_col(c, columns[c]);
  return CongruenceSolver(R, F, orders).solve(target);
}

// ------------------------------------------------------------- resolutions

SES free_presentation_on(const Module& M, const std::vector<Vec>& generators) {
  Module F = free_module(M.algebra(), generators.size());
  Morphism pi = free_map(F, M, generators);
  if (!is_epi(pi)) throw InvalidMorphism("the given elements do not generate the module");
  Kernel K = kernel(pi);
  return SES{K.inclusion, pi};
}

namespace {

bool in_submodule(const Module& M, const std::vector<Vec>& elems, const Vec& v) {
  const std::size_t n = M.algebra()->rank();
  Mat cols(M.gens(), elems.size() * n);
  for (std::size_t e = 0; e < elems.size(); ++e)
    for (std::size_t k = 0; k < n; ++k) cols.set_col(e * n + k, M.action(k) * elems[e]);
  return CongruenceSolver(M.base(), cols, M.orders()).solve(v).has_value();
}

}  // namespace

std::vector<Vec> module_generators(const Module& M) {
  std::vector<Vec> gens;
  for (std::size_t s = 0; s < M.gens(); ++s) {
    Vec e(M.gens());
    e[s] = 1;
    gens.push_back(e);
  }
  // Drop, in order, every generator lying in the submodule spanned by the
  // remaining ones.
  for (std::size_t s = 0; s < gens.size();) {
    std::vector<Vec> others;
    for (std::size_t t = 0; t < gens.size(); ++t)
      if (t != s) others.push_back(gens[t]);
    if (in_submodule(M, others, gens[s]))
      gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(s));
    else
      ++s;
  }
  return gens;
}

std::vector<Vec> free_generator_images(const Morphism& pi) {
  const AlgebraPtr& A = pi.src().algebra();
  const std::size_t n = A->rank(), r = pi.src().gens() / n;
  std::vector<Vec> out;
  for (std::size_t s = 0; s < r; ++s) {
    Vec u(pi.src().gens());
    for (std::size_t k = 0; k < n; ++k) u[s * n + k] = A->unit()[k];
    out.push_back(pi.apply(u));
  }
  return out;
}

SES free_presentation(const Module& M) { return free_presentation_on(M, module_generators(M)); }

const SES& Resolution::stage(std::size_t j) {
  while (stages_.size() <= j) {
    const Module& X = stages_.empty() ? module_ : stages_.back().left();
    stages_.push_back(free_presentation(X));
  }
  return stages_[j];
}

Module Resolution::syzygy(std::size_t i) {
  if (i == 0) return module_;
  return stage(i - 1).left();
}

std::shared_ptr<Resolution> resolution_of(const Module& M) {
  static std::mutex mu;
  static std::map<std::string, std::pair<AlgebraPtr, std::shared_ptr<Resolution>>> cache;
  std::string key = module_key(M);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.second;
  if (cache.size() > 4096) cache.clear();
  auto res = std::make_shared<Resolution>(M);
  cache.emplace(key, std::make_pair(M.algebra(), res));
  return res;
}

// ---------------------------------------------------------------- ExtGroup

ExtGroup::ExtGroup(SES stage, Module target, std::size_t degree)
    : stage_(std::move(stage)), target_(std::move(target)), degree_(degree) {
  const Module& K = stage_.left();
  const Module& F = stage_.middle();
  const AlgebraPtr& A = F.algebra();
  const BaseRing& R = A->base();
  hom_k_ = hom_group(K, target_);
  std::vector<Vec> images;
  const std::size_t n = A->rank();
  const bool free = F.gens() % n == 0 && F == free_module(A, F.gens() / n);
  if (free) {
    // Hom(A^r, N) is generated by the maps sending one free generator to
    // one generator of N.
    const std::size_t r = F.gens() / n;
    for (std::size_t s = 0; s < r; ++s)
      for (std::size_t i = 0; i < target_.gens(); ++i) {
        std::vector<Vec> imgs(r, Vec(target_.gens()));
        imgs[s][i] = 1;
        images.push_back(hom_k_.coordinates(compose(free_map(F, target_, imgs), stage_.i)));
      }
  } else {
    HomGroup hf = hom_group(F, target_);
    for (const auto& phi : hf.basis()) images.push_back(hom_k_.coordinates(compose(phi, stage_.i)));
  }
  const std::size_t h = hom_k_.size();
  Mat rel(h, 0);
  {
    std::vector<std::size_t> tors;
    for (std::size_t t = 0; t < h; ++t)
      if (sgn(hom_k_.orders()[t]) != 0) tors.push_back(t);
    rel = Mat(h, tors.size() + images.size());
    for (std::size_t c = 0; c < tors.size(); ++c) rel(tors[c], c) = hom_k_.orders()[tors[c]];
    for (std::size_t c = 0; c < images.size(); ++c)
      for (std::size_t t = 0; t < h; ++t) rel(t, tors.size() + c) = images[c][t];
  }
  Presentation p = present(R, h, rel);
  orders_ = p.orders;
  Q_ = p.Q;
  S_ = p.S;
}

Vec ExtGroup::class_of(const Morphism& cocycle) const {
  if (orders_.empty()) return {};
  return reduced_vec(target_.base(), Q_ * hom_k_.coordinates(cocycle), orders_);
}

Morphism ExtGroup::cocycle(const Vec& cls) const {
  if (orders_.empty()) return Morphism::zero(stage_.left(), target_);
  return hom_k_.element(S_ * cls);
}

bool ExtGroup::is_zero_class(const Vec& cls) const { return all_zero_mod(target_.base(), cls, orders_); }

std::vector<Morphism> ExtGroup::cocycle_basis() const {
  std::vector<Morphism> out;
  for (std::size_t t = 0; t < orders_.size(); ++t) {
    Vec e(orders_.size());
    e[t] = 1;
    out.push_back(cocycle(e));
  }
  return out;
}

ExtGroup ext(const Module& M, const Module& N, std::size_t i) {
  if (i == 0) throw AbmcError("Ext^0 is Hom; use hom_group");
  require_same_algebra(M.algebra(), N.algebra(), "ext");
  auto res = resolution_of(M);
  return ExtGroup(res->stage(i - 1), N, i);
}

// ------------------------------------------------------ extension classes

ExtensionClass extension_class(const SES& s) {
  const Module& C = s.right();
  auto res = resolution_of(C);
  const SES& st = res->stage(0);
  const BaseRing& R = C.base();
  CongruenceSolver solver(R, s.p.matrix(), C.orders());
  std::vector<Vec> lifts;
  for (const Vec& v : free_generator_images(st.p)) {
    auto x = solver.solve(v);
    if (!x) throw InvalidMorphism("extension_class: p is not surjective");
    lifts.push_back(*x);
  }
  Morphism phi = free_map(st.middle(), s.middle(), lifts);
  auto c = factor_through_mono(s.i, compose(phi, st.i));
  if (!c) throw InvalidMorphism("extension_class: sequence is not exact");
  ExtGroup g(st, s.left(), 1);
  Vec cls = g.class_of(*c);
  return ExtensionClass{std::move(g), std::move(cls)};
}

SES extension_from_class(const ExtGroup& g, const Vec& cls) {
  Morphism c = g.cocycle(cls);
  const SES& st = g.stage();
  Pushout Q = pushout(st.i, c);
  Morphism p = pushout_factor(Q, st.p, Morphism::zero(g.dst(), st.right()));
  return SES{Q.from_y, p};
}

std::optional<Morphism> lift_along(const Morphism& p, const Morphism& target) {
  const Module& T = target.src();
  HomGroup hb = hom_group(T, p.src());
  HomGroup hc = hom_group(T, p.dst());
  std::vector<Vec> cols;
  for (const auto& b : hb.basis()) cols.push_back(hc.coordinates(compose(p, b)));
  auto x = solve_in_group(T.base(), cols, hc.coordinates(target), hc.orders());
  if (!x) return std::nullopt;
  return hb.element(*x);
}

std::optional<Morphism> extend_along(const Morphism& i, const Morphism& target) {
  const Module& E = target.dst();
  HomGroup hb = hom_group(i.dst(), E);
  HomGroup ha = hom_group(i.src(), E);
  std::vector<Vec> cols;
  for (const auto& b : hb.basis()) cols.push_back(ha.coordinates(compose(b, i)));
  auto x = solve_in_group(E.base(), cols, ha.coordinates(target), ha.orders());
  if (!x) return std::nullopt;
  return hb.element(*x);
}

std::optional<Morphism> is_split(const SES& s) { return lift_along(s.p, Morphism::identity(s.right())); }

// ------------------------------------------------- projectives, injectives

Module syzygy(const Module& M, std::size_t i) { return resolution_of(M)->syzygy(i); }

bool is_projective(const Module& M) {
  if (M.is_zero()) return true;
  return is_split(resolution_of(M)->stage(0)).has_value();
}

AlgebraPtr cached_opposite(const AlgebraPtr& A) {
  static std::mutex mu;
  static std::map<const Algebra*, std::pair<AlgebraPtr, AlgebraPtr>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(A.get());
  if (it != cache.end()) return it->second.second;
  AlgebraPtr op = opposite_algebra(A);
  cache.emplace(A.get(), std::make_pair(A, op));
  return op;
}

bool is_injective(const Module& M) {
  if (M.is_zero()) return true;
  // A nonzero finitely generated module over Z[G] is never injective:
  // injective abelian groups are divisible.
  if (!M.base().is_field()) return false;
  return is_projective(dual_module(M, cached_opposite(M.algebra())));
}

bool proj_dim_at_most(const Module& M, std::size_t d) { return is_projective(syzygy(M, d)); }

}  // namespace abmc
