#include "abmc/chains.hpp"

#include <algorithm>

namespace abmc {

namespace {

Vec flatten(const Mat& m) { return m.entries(); }

// Row moduli of a flattened map into N with `cols` source generators.
Vec entry_moduli(const Module& N, std::size_t cols) {
  Vec out;
  out.reserve(N.gens() * cols);
  for (std::size_t r = 0; r < N.gens(); ++r)
    for (std::size_t c = 0; c < cols; ++c) out.push_back(N.orders()[r]);
  return out;
}

void append(Vec& v, const Vec& w) { v.insert(v.end(), w.begin(), w.end()); }

std::string name_of(const ChainComplex& X) { return X.label().empty() ? X.describe() : X.label(); }

std::string deg(int n) { return std::to_string(n); }

// Sum over m of D^m(M_m): degree m holds M_m (top of D^m) + M_{m+1} (bottom of
// D^{m+1}), and d_m = in2 pr1.
struct DiskSum {
  ChainComplex complex;
  std::map<int, Biproduct> parts;
};

DiskSum disk_sum(const AlgebraPtr& A, const std::map<int, Module>& M) {
  DiskSum out;
  if (M.empty()) {
    out.complex = ChainComplex::zero(A);
    return out;
  }
  const Module Z0 = zero_module(A);
  auto at = [&](int m) {
    auto it = M.find(m);
    return it == M.end() ? Z0 : it->second;
  };
  const int lo = M.begin()->first - 1, hi = M.rbegin()->first;
  std::vector<Module> entries;
  std::vector<Morphism> diffs;
  for (int m = lo; m <= hi; ++m) {
    out.parts.emplace(m, direct_sum(at(m), at(m + 1)));
    entries.push_back(out.parts.at(m).sum);
    if (m > lo) diffs.push_back(compose(out.parts.at(m - 1).in2, out.parts.at(m).pr1));
  }
  out.complex = ChainComplex(A, lo, std::move(entries), std::move(diffs));
  return out;
}

struct ChainKernel {
  ChainComplex complex;
  ChainMap inclusion;
};

ChainKernel chain_kernel(const ChainMap& f) {
  const ChainComplex& X = f.src;
  if (X.empty_window()) return {X, ChainMap{X, X, {}}};
  std::vector<Kernel> ks;
  std::vector<Module> entries;
  std::vector<Morphism> diffs;
  for (int n = X.lo(); n <= X.hi(); ++n) {
    ks.push_back(kernel(f.at(n)));
    entries.push_back(ks.back().module);
    if (n > X.lo()) {
      const Kernel& below = ks[ks.size() - 2];
      diffs.push_back(lift_into_kernel(below, compose(X.d(n), ks.back().inclusion)));
    }
  }
  ChainKernel out;
  out.complex = ChainComplex(X.algebra(), X.lo(), std::move(entries), std::move(diffs));
  out.inclusion = ChainMap{out.complex, X, {}};
  for (int n = X.lo(); n <= X.hi(); ++n) out.inclusion.comp.emplace(n, ks[n - X.lo()].inclusion);
  return out;
}

struct ChainCokernel {
  ChainComplex complex;
  ChainMap projection;
};

ChainCokernel chain_cokernel(const ChainMap& f) {
  const ChainComplex& Y = f.dst;
  ChainCokernel out;
  if (Y.empty_window()) {
    out.complex = Y;
    out.projection = ChainMap{Y, Y, {}};
    return out;
  }
  std::vector<Cokernel> cs;
  std::vector<Module> entries;
  std::vector<Morphism> diffs;
  for (int n = Y.lo(); n <= Y.hi(); ++n) {
    cs.push_back(cokernel(f.at(n)));
    entries.push_back(cs.back().module);
    if (n > Y.lo()) diffs.push_back(descend(cs.back(), compose(cs[cs.size() - 2].projection, Y.d(n))));
  }
  out.complex = ChainComplex(Y.algebra(), Y.lo(), std::move(entries), std::move(diffs));
  out.projection = ChainMap{Y, out.complex, {}};
  for (int n = Y.lo(); n <= Y.hi(); ++n) out.projection.comp.emplace(n, cs[n - Y.lo()].projection);
  return out;
}

// Cover of Y by the disks D^m(F_m) on free covers F_m -> Y_m.
struct DiskCover {
  DiskSum P;
  ChainMap epsilon;
};

DiskCover disk_cover(const ChainComplex& Y) {
  std::map<int, Module> F;
  std::map<int, Morphism> p;
  for (int m = Y.lo(); m <= Y.hi(); ++m) {
    if (Y.entry(m).is_zero()) continue;
    SES s = free_presentation(Y.entry(m));
    F.emplace(m, s.middle());
    p.emplace(m, s.p);
  }
  DiskCover out;
  out.P = disk_sum(Y.algebra(), F);
  out.epsilon = ChainMap{out.P.complex, Y, {}};
  for (const auto& [m, b] : out.P.parts) {
    Morphism top = p.count(m) ? p.at(m) : Morphism::zero(b.in1.src(), Y.entry(m));
    Morphism bot = p.count(m + 1) ? compose(Y.d(m + 1), p.at(m + 1)) : Morphism::zero(b.in2.src(), Y.entry(m));
    out.epsilon.comp.emplace(m, copair(b, top, bot));
  }
  return out;
}

bool is_disk(const ChainComplex& X) {
  return !X.empty_window() && X.hi() == X.lo() + 1 && X.entry(X.lo()) == X.entry(X.hi()) &&
         X.d(X.hi()) == Morphism::identity(X.entry(X.hi()));
}

bool homotopy_admissible(const ChainComplex& Y, const ChainComplex& X) {
  if (Y.empty_window() || X.empty_window()) return true;
  for (int n = std::max(Y.lo(), X.lo()); n <= std::min(Y.hi(), X.hi()); ++n)
    if (!Y.entry(n).is_zero() && !X.entry(n).is_zero() && !ext(Y.entry(n), X.entry(n), 1).is_zero()) return false;
  return true;
}

Vec quotient_orders(const BaseRing& R, const Vec& orders, const std::vector<Vec>& relations) {
  const std::size_t g = orders.size();
  Mat rel(g, g + relations.size());
  for (std::size_t t = 0; t < g; ++t) rel(t, t) = orders[t];
  for (std::size_t c = 0; c < relations.size(); ++c) rel.set_col(g + c, relations[c]);
  return present(R, g, rel).orders;
}

std::string map_string(const ChainMap& f) {
  std::string s;
  for (const auto& [n, m] : f.comp) {
    if (m.src().is_zero() || m.dst().is_zero()) continue;
    s += (s.empty() ? "" : ", ") + deg(n) + ": " + m.matrix().to_string();
  }
  return "{" + s + "}";
}

const ClassDescriptor& variant_class(const ChainClassSpec& spec) {
  switch (spec.variant) {
    case ChainVariant::TildeD:
    case ChainVariant::DgTildeD:
      return spec.base.left;
    default:
      return spec.base.right;
  }
}

Verdict exactness(const ChainComplex& X) {
  if (X.empty_window()) return Verdict::yes();
  for (int n = X.lo(); n <= X.hi(); ++n) {
    Module H = homology(X, n);
    if (!H.is_zero()) return Verdict::no("H_" + deg(n) + " = " + H.structure_string());
  }
  return Verdict::yes();
}

}  // namespace

// ------------------------------------------------------------------ complexes

ChainComplex::ChainComplex(AlgebraPtr A, int lo, std::vector<Module> entries, std::vector<Morphism> diffs,
                           std::string label)
    : algebra_(std::move(A)),
      lo_(lo),
      entries_(std::move(entries)),
      diffs_(std::move(diffs)),
      zero_(zero_module(algebra_)),
      label_(std::move(label)) {
  if (entries_.empty() ? !diffs_.empty() : diffs_.size() + 1 != entries_.size())
    throw InvalidComplex("expected one differential between consecutive entries");
  for (const auto& M : entries_) require_same_algebra(algebra_, M.algebra(), "chain complex");
  for (std::size_t k = 0; k < diffs_.size(); ++k) {
    const int n = lo_ + static_cast<int>(k) + 1;
    if (diffs_[k].src() != entries_[k + 1] || diffs_[k].dst() != entries_[k])
      throw InvalidComplex("d_" + deg(n) + " does not map X_" + deg(n) + " to X_" + deg(n - 1));
    if (k > 0 && !compose(diffs_[k - 1], diffs_[k]).is_zero())
      throw InvalidComplex("d_" + deg(n - 1) + " d_" + deg(n) + " is nonzero");
  }
}

ChainComplex ChainComplex::zero(AlgebraPtr A) { return ChainComplex(std::move(A), 0, {}, {}); }

const Module& ChainComplex::entry(int n) const {
  if (n < lo_ || n > hi()) return zero_;
  return entries_[static_cast<std::size_t>(n - lo_)];
}

Morphism ChainComplex::d(int n) const {
  if (n - 1 >= lo_ && n <= hi()) return diffs_[static_cast<std::size_t>(n - lo_ - 1)];
  return Morphism::zero(entry(n), entry(n - 1));
}

ChainComplex ChainComplex::with_label(std::string label) const {
  ChainComplex c = *this;
  c.label_ = std::move(label);
  return c;
}

std::size_t ChainComplex::max_entry_gens() const {
  std::size_t g = 0;
  for (const auto& M : entries_) g = std::max(g, M.gens());
  return g;
}

std::string ChainComplex::describe() const {
  if (entries_.empty()) return "0";
  std::string s;
  for (int n = hi(); n >= lo_; --n) s += (n == hi() ? "" : " -> ") + display_name(entry(n)) + "@" + deg(n);
  return s;
}

Morphism ChainMap::at(int n) const {
  auto it = comp.find(n);
  if (it != comp.end()) return it->second;
  return Morphism::zero(src.entry(n), dst.entry(n));
}

bool ChainMap::is_zero() const {
  for (const auto& [n, m] : comp)
    if (!m.is_zero()) return false;
  return true;
}

ChainMap make_chain_map(ChainComplex src, ChainComplex dst, std::map<int, Morphism> comp) {
  ChainMap f{std::move(src), std::move(dst), std::move(comp)};
  for (const auto& [n, m] : f.comp)
    if (m.src() != f.src.entry(n) || m.dst() != f.dst.entry(n))
      throw InvalidMorphism("component " + deg(n) + " has the wrong source or target");
  if (f.src.empty_window() || f.dst.empty_window()) return f;
  const int lo = std::min(f.src.lo(), f.dst.lo()), hi = std::max(f.src.hi(), f.dst.hi()) + 1;
  for (int n = lo; n <= hi; ++n)
    if (compose(f.dst.d(n), f.at(n)) != compose(f.at(n - 1), f.src.d(n)))
      throw InvalidMorphism("not a chain map at degree " + deg(n));
  return f;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  ChainMap h{f.src, g.dst, {}};
  std::vector<int> degrees;
  for (const auto& [n, m] : f.comp) degrees.push_back(n);
  for (int n : degrees)
    if (g.comp.count(n)) h.comp.emplace(n, compose(g.at(n), f.at(n)));
  return h;
}

Morphism ChainHomotopy::at(int n) const {
  auto it = s.find(n);
  if (it != s.end()) return it->second;
  return Morphism::zero(src.entry(n), dst.entry(n + 1));
}

ChainMap homotopy_boundary(const ChainHomotopy& h) {
  ChainMap f{h.src, h.dst, {}};
  if (h.src.empty_window() || h.dst.empty_window()) return f;
  for (int n = std::max(h.src.lo(), h.dst.lo()); n <= std::min(h.src.hi(), h.dst.hi()); ++n)
    f.comp.emplace(n, compose(h.dst.d(n + 1), h.at(n)) + compose(h.at(n - 1), h.src.d(n)));
  return f;
}

ChainComplex disk(int n, const Module& A) {
  return ChainComplex(A.algebra(), n - 1, {A, A}, {Morphism::identity(A)}, "D^" + deg(n) + "(" + display_name(A) + ")");
}

ChainComplex sphere(int n, const Module& A) {
  return ChainComplex(A.algebra(), n, {A}, {}, "S^" + deg(n) + "(" + display_name(A) + ")");
}

ChainComplex suspension(const ChainComplex& X) {
  if (X.empty_window()) return X;
  std::vector<Module> entries;
  std::vector<Morphism> diffs;
  for (int n = X.lo(); n <= X.hi(); ++n) {
    entries.push_back(X.entry(n));
    if (n > X.lo()) diffs.push_back(-X.d(n));
  }
  return ChainComplex(X.algebra(), X.lo() + 1, std::move(entries), std::move(diffs),
                      X.label().empty() ? "" : "Sigma " + X.label());
}

ChainComplex chain_sum(const ChainComplex& X, const ChainComplex& Y) {
  if (X.empty_window()) return Y;
  if (Y.empty_window()) return X;
  const int lo = std::min(X.lo(), Y.lo()), hi = std::max(X.hi(), Y.hi());
  std::vector<Biproduct> b;
  std::vector<Module> entries;
  std::vector<Morphism> diffs;
  for (int n = lo; n <= hi; ++n) {
    b.push_back(direct_sum(X.entry(n), Y.entry(n)));
    entries.push_back(b.back().sum);
    if (n > lo) diffs.push_back(sum_map(b.back(), b[b.size() - 2], X.d(n), Y.d(n)));
  }
  std::string label;
  if (!X.label().empty() && !Y.label().empty()) label = X.label() + " + " + Y.label();
  return ChainComplex(X.algebra(), lo, std::move(entries), std::move(diffs), label);
}

Module cycles(const ChainComplex& X, int n) { return kernel(X.d(n)).module; }

Module boundaries(const ChainComplex& X, int n) { return image(X.d(n + 1)).module; }

Module homology(const ChainComplex& X, int n) {
  Kernel z = kernel(X.d(n));
  return cokernel(lift_into_kernel(z, X.d(n + 1))).module;
}

bool is_exact(const ChainComplex& X) { return exactness(X).holds(); }

// ------------------------------------------------------------- chain homs

ChainHomGroup::ChainHomGroup(ChainComplex X, ChainComplex Y) : X_(std::move(X)), Y_(std::move(Y)) {
  if (X_.empty_window() || Y_.empty_window()) return;
  require_same_algebra(X_.algebra(), Y_.algebra(), "chain hom");
  lo_ = std::max(X_.lo(), Y_.lo());
  hi_ = std::min(X_.hi(), Y_.hi());
  if (hi_ < lo_) return;
  const BaseRing& R = X_.algebra()->base();
  std::vector<std::size_t> offset;
  std::size_t vars = 0;
  for (int n = lo_; n <= hi_; ++n) {
    degree_.emplace_back(X_.entry(n), Y_.entry(n));
    offset.push_back(vars);
    vars += degree_.back().size();
    append(amb_orders_, degree_.back().orders());
  }
  if (vars == 0) return;
  // d f_n - f_{n-1} d = 0 as maps X_n -> Y_{n-1}
  std::vector<Vec> rows;
  Vec moduli;
  for (int n = lo_; n <= hi_ + 1; ++n) {
    const Module& S = X_.entry(n);
    const Module& T = Y_.entry(n - 1);
    if (S.is_zero() || T.is_zero()) continue;
    const std::size_t width = T.gens() * S.gens();
    std::vector<Vec> cols(vars, Vec(width));
    if (n <= hi_) {
      const HomGroup& H = degree_[static_cast<std::size_t>(n - lo_)];
      for (std::size_t t = 0; t < H.size(); ++t)
        cols[offset[n - lo_] + t] = flatten(compose(Y_.d(n), H.basis()[t]).matrix());
    }
    if (n - 1 >= lo_) {
      const HomGroup& H = degree_[static_cast<std::size_t>(n - 1 - lo_)];
      for (std::size_t t = 0; t < H.size(); ++t)
        cols[offset[n - 1 - lo_] + t] = flatten((-compose(H.basis()[t], X_.d(n))).matrix());
    }
    Vec mod = entry_moduli(T, S.gens());
    for (std::size_t r = 0; r < width; ++r) {
      Vec row(vars);
      for (std::size_t c = 0; c < vars; ++c) row[c] = cols[c][r];
      rows.push_back(std::move(row));
      moduli.push_back(mod[r]);
    }
  }
  Mat phi(rows.size(), vars);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < vars; ++c) phi(r, c) = rows[r][c];
  Mat L = rows.empty() ? Mat::identity(vars) : congruence_kernel(R, phi, moduli);
  SubgroupPresentation sub = subgroup_presentation(R, amb_orders_, L);
  orders_ = sub.orders;
  inclusion_ = sub.inclusion;
  for (std::size_t j = 0; j < inclusion_.cols(); ++j) {
    ChainMap f{X_, Y_, {}};
    const Vec c = inclusion_.col(j);
    for (int n = lo_; n <= hi_; ++n) {
      const HomGroup& H = degree_[static_cast<std::size_t>(n - lo_)];
      Vec part(c.begin() + offset[n - lo_], c.begin() + offset[n - lo_] + H.size());
      f.comp.emplace(n, H.element(part));
    }
    basis_.push_back(std::move(f));
  }
  if (!basis_.empty()) solver_ = std::make_shared<const CongruenceSolver>(R, inclusion_, amb_orders_);
}

Vec ChainHomGroup::flat(const ChainMap& f) const {
  Vec v;
  for (int n = lo_; n <= hi_; ++n) append(v, degree_[static_cast<std::size_t>(n - lo_)].coordinates(f.at(n)));
  return v;
}

Vec ChainHomGroup::coordinates(const ChainMap& f) const {
  if (basis_.empty()) return {};
  auto x = solver_->solve(flat(f));
  if (!x) throw InvalidMorphism("coordinates requested for a map outside the chain Hom group");
  return reduced_vec(X_.algebra()->base(), *x, orders_);
}

ChainMap ChainHomGroup::element(const Vec& c) const {
  ChainMap f{X_, Y_, {}};
  if (basis_.empty()) return f;
  const Vec amb = inclusion_ * c;
  std::size_t off = 0;
  for (int n = lo_; n <= hi_; ++n) {
    const HomGroup& H = degree_[static_cast<std::size_t>(n - lo_)];
    Vec part(amb.begin() + off, amb.begin() + off + H.size());
    f.comp.emplace(n, H.element(part));
    off += H.size();
  }
  return f;
}

std::optional<ChainHomotopy> null_homotopy(const ChainMap& f) {
  const ChainComplex& X = f.src;
  const ChainComplex& Y = f.dst;
  ChainHomotopy h{X, Y, {}};
  if (X.empty_window() || Y.empty_window()) return h;
  const BaseRing& R = X.algebra()->base();
  const int lo = std::max(X.lo(), Y.lo() - 1), hi = std::min(X.hi(), Y.hi() - 1);
  std::map<int, HomGroup> S;
  for (int n = lo; n <= hi; ++n)
    if (!X.entry(n).is_zero() && !Y.entry(n + 1).is_zero()) S.emplace(n, HomGroup(X.entry(n), Y.entry(n + 1)));
  // one block of equations per degree n with X_n, Y_n nonzero
  Vec target, moduli;
  std::map<int, std::size_t> block;
  for (int n = std::max(X.lo(), Y.lo()); n <= std::min(X.hi(), Y.hi()); ++n) {
    if (X.entry(n).is_zero() || Y.entry(n).is_zero()) continue;
    block.emplace(n, target.size());
    append(target, flatten(f.at(n).matrix()));
    append(moduli, entry_moduli(Y.entry(n), X.entry(n).gens()));
  }
  std::vector<Vec> cols;
  std::vector<std::pair<int, std::size_t>> var;
  for (const auto& [n, H] : S)
    for (std::size_t t = 0; t < H.size(); ++t) {
      Vec col(target.size());
      ChainHomotopy one{X, Y, {{n, H.basis()[t]}}};
      for (const auto& [m, g] : homotopy_boundary(one).comp) {
        auto it = block.find(m);
        if (it == block.end()) continue;
        const Vec v = flatten(g.matrix());
        std::copy(v.begin(), v.end(), col.begin() + static_cast<long>(it->second));
      }
      cols.push_back(std::move(col));
      var.emplace_back(n, t);
    }
  if (cols.empty()) {
    if (!rows_vanish_mod(R, Mat::column(target), moduli) && !target.empty()) return std::nullopt;
    return h;
  }
  auto x = solve_in_group(R, cols, target, moduli);
  if (!x) return std::nullopt;
  for (const auto& [n, H] : S) {
    Vec part(H.size());
    for (std::size_t k = 0; k < var.size(); ++k)
      if (var[k].first == n) part[var[k].second] = (*x)[k];
    h.s.emplace(n, H.element(part));
  }
  return h;
}

// --------------------------------------------------------------------- Ext^1

std::string route_string(ChainExtRoute r) {
  switch (r) {
    case ChainExtRoute::Auto:
      return "auto";
    case ChainExtRoute::Resolution:
      return "resolution";
    case ChainExtRoute::HomotopyClasses:
      return "homotopy-classes";
    default:
      return "disk-reduction";
  }
}

ChainExt chain_ext1(const ChainComplex& Y, const ChainComplex& X, ChainExtRoute route) {
  const AlgebraPtr& A = Y.empty_window() ? X.algebra() : Y.algebra();
  const BaseRing& R = A->base();
  if (route == ChainExtRoute::Auto) {
    if (is_disk(X))
      route = ChainExtRoute::DiskReduction;
    else if (homotopy_admissible(Y, X))
      route = ChainExtRoute::HomotopyClasses;
    else
      route = ChainExtRoute::Resolution;
  }
  ChainExt out;
  out.route = route;
  auto finish = [&](Vec orders) {
    out.orders = std::move(orders);
    out.structure = abelian_group_string(R, out.orders);
    return out;
  };
  if (Y.empty_window() || X.empty_window()) return finish({});

  if (route == ChainExtRoute::DiskReduction) {
    if (!is_disk(X)) throw AbmcError("disk reduction needs a disk as second argument");
    return finish(ext(Y.entry(X.lo()), X.entry(X.lo()), 1).orders());
  }

  if (route == ChainExtRoute::HomotopyClasses) {
    if (!homotopy_admissible(Y, X))
      throw AbmcError("homotopy classes compute Ext^1 only when every Ext^1(Y_n, X_n) vanishes");
    ChainComplex SX = suspension(X);
    ChainHomGroup H(Y, SX);
    std::vector<Vec> rel;
    for (int n = Y.lo(); n <= Y.hi(); ++n) {
      if (Y.entry(n).is_zero() || SX.entry(n + 1).is_zero()) continue;
      for (const auto& s : hom_group(Y.entry(n), SX.entry(n + 1)).basis())
        rel.push_back(H.coordinates(homotopy_boundary(ChainHomotopy{Y, SX, {{n, s}}})));
    }
    return finish(quotient_orders(R, H.orders(), rel));
  }

  // 0 -> K -> P -> Y -> 0 with P projective in complexes
  DiskCover cover = disk_cover(Y);
  ChainKernel K = chain_kernel(cover.epsilon);
  ChainHomGroup HK(K.complex, X);
  std::vector<Vec> rel;
  for (const auto& [m, b] : cover.P.parts) {
    const Module& Fm = b.in1.src();
    if (Fm.is_zero() || X.entry(m).is_zero()) continue;
    for (const auto& phi : hom_group(Fm, X.entry(m)).basis()) {
      ChainMap restricted{K.complex, X, {}};
      restricted.comp.emplace(m, compose(compose(phi, b.pr1), K.inclusion.at(m)));
      const Biproduct& below = cover.P.parts.at(m - 1);
      restricted.comp.emplace(m - 1, compose(compose(compose(X.d(m), phi), below.pr2), K.inclusion.at(m - 1)));
      rel.push_back(HK.coordinates(restricted));
    }
  }
  return finish(quotient_orders(R, HK.orders(), rel));
}

// ------------------------------------------------------------------- classes

std::string variant_string(ChainVariant v) {
  switch (v) {
    case ChainVariant::TildeD:
      return "tilde-D";
    case ChainVariant::TildeE:
      return "tilde-E";
    case ChainVariant::DgTildeD:
      return "dg-tilde-D";
    case ChainVariant::DgTildeE:
      return "dg-tilde-E";
    default:
      return "exact";
  }
}

Verdict tilde_member(const ChainClassSpec& spec, const ChainComplex& X) {
  if (spec.variant != ChainVariant::TildeD && spec.variant != ChainVariant::TildeE)
    throw AbmcError("tilde_member needs the TildeD or TildeE variant");
  Verdict v = exactness(X);
  if (!v.holds() || X.empty_window()) return v;
  const ClassDescriptor& c = variant_class(spec);
  for (int n = X.lo(); n <= X.hi(); ++n) {
    Verdict z = class_member(c, cycles(X, n));
    if (!z.holds()) return Verdict::no("Z_" + deg(n) + " not in " + c.name() + ": " + z.certificate);
    v = both(v, z);
  }
  return v;
}

Verdict dg_member(const ChainClassSpec& spec, const ChainComplex& X) {
  if (spec.variant != ChainVariant::DgTildeD && spec.variant != ChainVariant::DgTildeE)
    throw AbmcError("dg_member needs the DgTildeD or DgTildeE variant");
  const ClassDescriptor& c = variant_class(spec);
  Verdict v = Verdict::yes();
  if (!X.empty_window())
    for (int n = X.lo(); n <= X.hi(); ++n) {
      Verdict e = class_member(c, X.entry(n));
      if (!e.holds()) return Verdict::no("X_" + deg(n) + " not in " + c.name() + ": " + e.certificate);
      v = both(v, e);
    }
  const bool outward = spec.variant == ChainVariant::DgTildeD;
  for (const auto& W : spec.witnesses) {
    ChainHomGroup H = outward ? ChainHomGroup(X, W) : ChainHomGroup(W, X);
    for (const auto& f : H.basis())
      if (!null_homotopy(f))
        return Verdict::no("chain map " + (outward ? name_of(X) + " -> " + name_of(W) : name_of(W) + " -> " + name_of(X)) +
                           " " + map_string(f) + " is not null-homotopic");
  }
  std::string family = spec.family.empty() ? std::to_string(spec.witnesses.size()) + " witness complexes" : spec.family;
  return both(v, Verdict::relative(family));
}

Verdict chain_member(const ChainClassSpec& spec, const ChainComplex& X) {
  switch (spec.variant) {
    case ChainVariant::TildeD:
    case ChainVariant::TildeE:
      return tilde_member(spec, X);
    case ChainVariant::DgTildeD:
    case ChainVariant::DgTildeE:
      return dg_member(spec, X);
    default:
      return exactness(X);
  }
}

// ------------------------------------------------------------------- catalog

std::vector<ComplexEntry> complex_catalog(const AlgebraPtr& A, const ComplexBounds& bounds, std::uint64_t seed) {
  if (bounds.max_entry_dim > max_dim_cap())
    throw CatalogTooLarge("entry dimension " + std::to_string(bounds.max_entry_dim) + " exceeds the cap " +
                          std::to_string(max_dim_cap()));
  std::vector<ComplexEntry> out;
  std::vector<Module> mods, projs;
  for (const auto& M : catalog_modules(A, CatalogBounds{bounds.max_entry_dim, 4, 256}))
    if (!M.is_zero()) {
      mods.push_back(M);
      if (is_projective(M)) projs.push_back(M);
    }
  out.push_back({ChainComplex::zero(A).with_label("0"), "zero complex"});
  if (mods.empty() || bounds.max_length == 0) return out;
  for (const auto& M : mods) {
    out.push_back({sphere(0, M), "sphere on catalog module " + display_name(M)});
    if (bounds.max_length >= 2) out.push_back({disk(1, M), "disk on catalog module " + display_name(M)});
  }
  if (bounds.max_length < 2) return out;
  Rng rng(seed);
  std::size_t made = 0;
  for (std::size_t attempt = 0; made < bounds.random_count && attempt < 8 * bounds.random_count + 8; ++attempt) {
    const Module& M = mods[rng.index(mods.size())];
    const Module& N = mods[rng.index(mods.size())];
    Morphism f = random_morphism(rng, M, N);
    if (f.is_zero() || is_iso(f)) continue;
    Kernel k = kernel(f);
    Image im = image(f);
    ++made;
    std::vector<Module> entries;
    std::vector<Morphism> diffs;
    int lo = 0;
    if (!im.module.is_zero() && !k.module.is_zero() && bounds.max_length >= 3) {
      entries = {im.module, M, k.module};
      diffs = {im.corestriction, k.inclusion};
    } else if (k.module.is_zero()) {
      entries = {N, M};
      diffs = {f};
    } else {
      entries = {M, k.module};
      diffs = {k.inclusion};
    }
    out.push_back({ChainComplex(A, lo, std::move(entries), std::move(diffs), "ses#" + std::to_string(made)),
                   "exact piece of a seeded map " + display_name(M) + " -> " + display_name(N)});
  }
  made = 0;
  for (std::size_t attempt = 0; made < bounds.random_count && attempt < 8 * bounds.random_count + 8; ++attempt) {
    const bool projective = (attempt % 2 == 0) && !projs.empty();
    const std::vector<Module>& pool = projective ? projs : mods;
    const auto len = static_cast<std::size_t>(rng.uniform(2, static_cast<long>(std::max<std::size_t>(bounds.max_length, 2))));
    std::vector<Module> entries{pool[rng.index(pool.size())]};
    std::vector<Morphism> diffs;
    for (std::size_t k = 1; k < len; ++k) {
      const Module& S = pool[rng.index(pool.size())];
      if (k == 1) {
        diffs.push_back(random_morphism(rng, S, entries.back()));
      } else {
        Kernel z = kernel(diffs.back());
        diffs.push_back(compose(z.inclusion, random_morphism(rng, S, z.module)));
      }
      entries.push_back(S);
    }
    bool trivial = true;
    for (const auto& d : diffs) trivial = trivial && d.is_zero();
    if (trivial) continue;
    ++made;
    out.push_back({ChainComplex(A, 0, std::move(entries), std::move(diffs), "rand#" + std::to_string(made)),
                   std::string("seeded random complex") + (projective ? " on projective entries" : "")});
  }
  return out;
}

// -------------------------------------------------------------- induced pair

InducedPairReport verify_induced_pair(const CotorsionPair& base, const std::vector<ComplexEntry>& catalog,
                                      const std::vector<Module>& module_universe) {
  InducedPairReport r;
  r.catalog_size = catalog.size();
  std::vector<ChainComplex> tD, tE;
  std::vector<bool> exact, in_tD, in_tE;
  for (const auto& e : catalog) {
    exact.push_back(is_exact(e.complex));
    in_tD.push_back(tilde_member({base, ChainVariant::TildeD, {}, ""}, e.complex).holds());
    in_tE.push_back(tilde_member({base, ChainVariant::TildeE, {}, ""}, e.complex).holds());
    if (in_tD.back()) tD.push_back(e.complex);
    if (in_tE.back()) tE.push_back(e.complex);
  }
  r.family = "catalog tilde members: " + std::to_string(tD.size()) + " tilde-D, " + std::to_string(tE.size()) +
             " tilde-E";
  ChainClassSpec dgD{base, ChainVariant::DgTildeD, tE, r.family};
  ChainClassSpec dgE{base, ChainVariant::DgTildeE, tD, r.family};
  std::vector<ChainComplex> dD, dE;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const ChainComplex& X = catalog[k].complex;
    const bool d = dg_member(dgD, X).holds(), e = dg_member(dgE, X).holds();
    if (d) dD.push_back(X);
    if (e) dE.push_back(X);
    r.exact += exact[k];
    if ((d && exact[k]) != in_tD[k] && r.compatibility) {
      r.compatibility = false;
      r.compatibility_certificate = name_of(X) + (in_tD[k] ? ": tilde-D but not in dg-tilde-D n Exact"
                                                           : ": dg-tilde-D and exact but not tilde-D");
    }
    if ((e && exact[k]) != in_tE[k] && r.compatibility) {
      r.compatibility = false;
      r.compatibility_certificate = name_of(X) + (in_tE[k] ? ": tilde-E but not in dg-tilde-E n Exact"
                                                           : ": dg-tilde-E and exact but not tilde-E");
    }
  }
  r.tilde_d = tD.size();
  r.tilde_e = tE.size();
  r.dg_d = dD.size();
  r.dg_e = dE.size();
  auto sweep = [&](const std::vector<ChainComplex>& left, const std::vector<ChainComplex>& right) {
    for (const auto& Y : left)
      for (const auto& X : right) {
        ++r.ext_cells;
        ChainExt g = chain_ext1(Y, X);
        if (!g.is_zero() && r.orthogonality) {
          r.orthogonality = false;
          r.orthogonality_certificate = "Ext^1(" + name_of(Y) + ", " + name_of(X) + ") = " + g.structure;
        }
      }
  };
  sweep(tD, dE);
  sweep(dD, tE);
  r.hereditary = is_hereditary(base, module_universe, 2);
  r.compatibility_asserted = r.hereditary.pass();
  return r;
}

// ------------------------------------------------------------ enough injectives

ChainApprox chain_enough_injectives_pushout(const CotorsionPair& base, const ChainComplex& X,
                                            const std::vector<ChainComplex>& witnesses, bool quick_path) {
  const AlgebraPtr& A = X.algebra();
  ChainClassSpec dgD{base, ChainVariant::DgTildeD, witnesses, ""};
  ChainClassSpec tE{base, ChainVariant::TildeE, {}, ""};
  ChainApprox out;
  if (quick_path) {
    Verdict q = dg_member(dgD, X);
    if (q.holds()) {
      ChainComplex Z = ChainComplex::zero(A);
      ChainMap id{X, X, {}};
      for (int n = X.lo(); n <= X.hi() && !X.empty_window(); ++n) id.comp.emplace(n, Morphism::identity(X.entry(n)));
      out.cover = id;
      out.kernel = Z;
      out.embedding = {ChainMap{Z, Z, {}}, ChainMap{Z, Z, {}}};
      out.result = {ChainMap{Z, X, {}}, id};
      out.memberships = {{"E in tilde-E", Verdict::yes()}, {"Q in dg-tilde-D", q}};
      out.route = "quick";
      return out;
    }
  }
  DiskCover cover = disk_cover(X);
  ChainKernel K = chain_kernel(cover.epsilon);
  out.cover = cover.epsilon;
  out.kernel = K.complex;

  std::map<int, Morphism> j;
  std::map<int, Module> shifted;  // I_{m-1} at index m
  if (!K.complex.empty_window())
    for (int n = K.complex.lo(); n <= K.complex.hi(); ++n) {
      const Module& Kn = K.complex.entry(n);
      if (Kn.is_zero()) continue;
      try {
        ApproxSES a = A->base().is_field() ? special_preenvelope(injective_pair(A), Kn) : special_preenvelope(base, Kn);
        j.emplace(n, a.ses.i);
        shifted.emplace(n + 1, a.ses.middle());
      } catch (const NoProvider& e) {
        throw ProviderFailed("degreewise embedding", e.what());
      }
    }
  DiskSum E = disk_sum(A, shifted);
  ChainMap iota{K.complex, E.complex, {}};
  for (const auto& [m, b] : E.parts) {
    const Module& Km = K.complex.entry(m);
    Morphism top = j.count(m - 1) ? compose(j.at(m - 1), K.complex.d(m)) : Morphism::zero(Km, b.in1.src());
    Morphism bot = j.count(m) ? j.at(m) : Morphism::zero(Km, b.in2.src());
    iota.comp.emplace(m, pair_into(b, top, bot));
  }
  ChainCokernel D = chain_cokernel(iota);
  out.embedding = {iota, D.projection};

  // degreewise pushout of E <- K -> P
  const ChainComplex& P = cover.P.complex;
  const int lo = std::min(P.lo(), E.complex.empty_window() ? P.lo() : E.complex.lo());
  const int hi = std::max(P.hi(), E.complex.empty_window() ? P.hi() : E.complex.hi());
  std::vector<Pushout> po;
  std::vector<Module> entries;
  std::vector<Morphism> diffs;
  for (int n = lo; n <= hi; ++n) {
    po.push_back(pushout(iota.at(n), K.inclusion.at(n)));
    entries.push_back(po.back().module);
    if (n > lo) {
      const Pushout& below = po[po.size() - 2];
      diffs.push_back(pushout_factor(po.back(), compose(below.from_x, E.complex.d(n)), compose(below.from_y, P.d(n))));
    }
  }
  ChainComplex Q(A, lo, std::move(entries), std::move(diffs), "Q");
  ChainMap i{E.complex, Q, {}}, p{Q, X, {}};
  for (int n = lo; n <= hi; ++n) {
    const Pushout& s = po[n - lo];
    i.comp.emplace(n, s.from_x);
    p.comp.emplace(n, pushout_factor(s, Morphism::zero(E.complex.entry(n), X.entry(n)), cover.epsilon.at(n)));
    if (auto bad = ses_defect(i.at(n), p.at(n)))
      throw ProviderFailed("pushout", "degree " + deg(n) + ": " + *bad);
  }
  out.result = {i, p};
  out.route = "pushout";
  out.memberships.push_back({"E in tilde-E", tilde_member(tE, E.complex)});
  out.memberships.push_back({"Q in dg-tilde-D", dg_member(dgD, Q)});
  for (const auto& m : out.memberships)
    if (!m.verdict.holds()) throw ProviderFailed(m.what, m.verdict.certificate);
  return out;
}

}  // namespace abmc
