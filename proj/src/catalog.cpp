#include "abmc/catalog.hpp"

#include <cstdlib>
#include <functional>

namespace abmc {

std::size_t max_dim_cap() {
  if (const char* env = std::getenv("ABMC_MAX_DIM")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<std::size_t>(v);
  }
  return 8;
}

namespace {

void add_unique(std::vector<CatalogEntry>& out, const Module& M, const std::string& provenance) {
  for (const auto& e : out)
    if (e.module == M) return;
  out.push_back(CatalogEntry{M, provenance});
}

std::vector<CatalogEntry> integer_catalog(const AlgebraPtr& A, const CatalogBounds& b) {
  std::vector<CatalogEntry> out;
  // Invariant factor chains d_1 | ... | d_t (each <= max_factor), then free rank.
  std::vector<std::vector<long>> chains{{}};
  for (std::size_t len = 1; len <= b.max_dim; ++len) {
    std::vector<std::vector<long>> next;
    for (const auto& c : chains) {
      if (c.size() != len - 1) continue;
      long start = c.empty() ? 2 : c.back();
      for (long d = start; d <= b.max_factor; ++d)
        if (c.empty() || d % c.back() == 0) {
          auto e = c;
          e.push_back(d);
          next.push_back(e);
        }
    }
    chains.insert(chains.end(), next.begin(), next.end());
  }
  for (std::size_t dim = 0; dim <= b.max_dim; ++dim)
    for (const auto& c : chains) {
      if (c.size() > dim) continue;
      const std::size_t free = dim - c.size();
      if (b.max_factor < 1 && (free > 0 || !c.empty())) continue;
      Vec orders;
      for (long d : c) orders.push_back(d);
      orders.resize(dim);
      Module M = Module::from_canonical(A, orders, {Mat::identity(dim)});
      M = M.with_label(M.structure_string());
      add_unique(out, M, "canonical form");
    }
  return out;
}

Module cyclic_quotient(const AlgebraPtr& A, const Vec& a) {
  Module F = free_module(A, 1);
  const std::size_t n = A->rank();
  Mat right(n, n);
  for (std::size_t j = 0; j < n; ++j) right.set_col(j, A->multiply(A->basis_element(j), a));
  Module C = cokernel(Morphism::trusted(F, F, right)).module;
  return C.with_label(A->name() + "/" + A->name() + "(" + element_string(*A, a) + ")");
}

std::vector<Vec> element_box(const AlgebraPtr& A, long c) {
  const BaseRing& R = A->base();
  const std::size_t n = A->rank();
  long lo = R.is_field() ? 0 : -c;
  long hi = R.is_field() ? static_cast<long>(R.characteristic()) - 1 : c;
  std::vector<Vec> out;
  Vec cur(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (out.size() > 4096) return;
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (long v = lo; v <= hi; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<CatalogEntry> seeds(const AlgebraPtr& A, const CatalogBounds& b) {
  std::vector<CatalogEntry> out;
  const BaseRing& R = A->base();
  auto fits = [&](const Module& M) { return !M.is_zero() && M.gens() <= b.max_dim; };
  if (A->is_group_algebra()) {
    Module t = trivial_module(A);
    if (fits(t)) add_unique(out, t, "trivial module");
    if (A->rank() == 2) {
      Module s = sign_module(A);
      if (fits(s)) add_unique(out, s, "sign module");
    }
    if (!R.is_field())
      for (long m = 2; m <= b.max_factor; ++m) {
        Module tm = trivial_module(A, m);
        if (fits(tm)) add_unique(out, tm, "trivial module mod " + std::to_string(m));
        if (A->rank() == 2) {
          Module sm = sign_module(A, m);
          if (fits(sm)) add_unique(out, sm, "sign module mod " + std::to_string(m));
        }
      }
  }
  Module F = free_module(A, 1);
  if (fits(F)) add_unique(out, F, "free module of rank 1");
  std::vector<Vec> elems = element_box(A, 1);
  if (!R.is_field())
    for (long m = 2; m <= b.max_factor; ++m) {
      Vec a = A->unit();
      for (auto& e : a) e *= m;
      elems.push_back(a);
    }
  for (const auto& a : elems) {
    Module C = cyclic_quotient(A, a);
    if (fits(C)) add_unique(out, C, "cyclic quotient A/A(" + element_string(*A, a) + ")");
  }
  return out;
}

}  // namespace

std::vector<CatalogEntry> module_catalog(const AlgebraPtr& A, const CatalogBounds& bounds) {
  if (bounds.max_dim > max_dim_cap())
    throw CatalogTooLarge("catalog dimension bound " + std::to_string(bounds.max_dim) + " exceeds the cap " +
                          std::to_string(max_dim_cap()) + " (ABMC_MAX_DIM)");
  if (A->rank() == 1 && !A->base().is_field()) {
    auto out = integer_catalog(A, bounds);
    if (out.size() > bounds.max_entries) out.resize(bounds.max_entries);
    return out;
  }
  std::vector<CatalogEntry> out;
  add_unique(out, zero_module(A), "zero module");
  if (bounds.max_dim == 0) return out;
  std::vector<CatalogEntry> base = seeds(A, bounds);
  // Direct sums of seeds, as multisets in seed order, by increasing dimension.
  struct Partial {
    Module module;
    std::size_t last;
    std::string provenance;
  };
  std::vector<Partial> frontier;
  for (std::size_t i = 0; i < base.size(); ++i) frontier.push_back({base[i].module, i, base[i].provenance});
  std::vector<Partial> all = frontier;
  while (!frontier.empty()) {
    std::vector<Partial> next;
    for (const auto& p : frontier)
      for (std::size_t i = p.last; i < base.size(); ++i) {
        if (p.module.gens() + base[i].module.gens() > bounds.max_dim) continue;
        Module S = direct_sum(p.module, base[i].module).sum;
        next.push_back({S, i, "sum of " + p.module.label() + " and " + base[i].module.label()});
      }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
    if (all.size() > 20 * bounds.max_entries) break;
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Partial& a, const Partial& b) { return a.module.gens() < b.module.gens(); });
  for (const auto& p : all) {
    if (out.size() >= bounds.max_entries) break;
    add_unique(out, p.module, p.provenance);
  }
  return out;
}

std::vector<Module> catalog_modules(const AlgebraPtr& A, const CatalogBounds& bounds) {
  std::vector<Module> out;
  for (auto& e : module_catalog(A, bounds)) out.push_back(e.module);
  return out;
}

// ---------------------------------------------------------------- sampling

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

long Rng::uniform(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(next() % span);
}

std::size_t Rng::index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

std::uint64_t Rng::seed_for(std::uint64_t stream) {
  Rng r(state_ ^ (stream * 0xD1B54A32D192ED03ULL));
  return r.next();
}

Morphism random_morphism(Rng& rng, const HomGroup& H, long coeff_bound) {
  Vec c(H.size());
  for (auto& e : c) e = rng.uniform(-coeff_bound, coeff_bound);
  return H.element(c);
}

Morphism random_morphism(Rng& rng, const Module& M, const Module& N, long coeff_bound) {
  return random_morphism(rng, hom_group(M, N), coeff_bound);
}

}  // namespace abmc
