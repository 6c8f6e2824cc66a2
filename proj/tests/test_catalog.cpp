#include "doctest.h"

#include <cstdlib>
#include <set>

#include "abmc/catalog.hpp"
#include "fixtures.hpp"

using namespace abmc;
using namespace fx;

namespace {

// Invariant-factor chains d1 | d2 | ... with entries in {2..max_factor} or 0
// (a copy of Z), at most max_dim of them.
std::size_t z_catalog_count(std::size_t max_dim, long max_factor) {
  std::vector<long> values{0};
  for (long d = 2; d <= max_factor; ++d) values.push_back(d);
  auto divides = [](long a, long b) { return b == 0 || (a != 0 && b % a == 0); };
  std::size_t count = 0;
  std::vector<std::vector<long>> layer{{}};
  for (std::size_t len = 0; len <= max_dim; ++len) {
    count += layer.size();
    std::vector<std::vector<long>> next;
    for (const auto& chain : layer)
      for (long v : values)
        if (chain.empty() || divides(chain.back(), v)) {
          auto c = chain;
          c.push_back(v);
          next.push_back(c);
        }
    layer = std::move(next);
  }
  return count;
}

std::size_t rank_f2(Mat m) {
  std::size_t r = 0;
  for (std::size_t j = 0; j < m.cols() && r < m.rows(); ++j) {
    std::size_t p = r;
    while (p < m.rows() && (m(p, j) % 2) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && (m(i, j) % 2) != 0)
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) += m(r, k);
    ++r;
  }
  return r;
}

// An F2[C2]-module is k^a + A^b; dimension and rank of g - 1 recover (a, b).
std::pair<std::size_t, std::size_t> f2c2_type(const Module& M) {
  const std::size_t n = M.gens();
  const std::size_t b = n == 0 ? 0 : rank_f2(M.action(1) + Mat::identity(n));
  return {n - 2 * b, b};
}

}  // namespace

TEST_CASE("catalog over Z is every bounded canonical group") {
  for (std::size_t dim : {1u, 2u, 3u}) {
    CatalogBounds b;
    b.max_dim = dim;
    b.max_factor = 4;
    auto cat = catalog_modules(ZZ(), b);
    CHECK(cat.size() == z_catalog_count(dim, 4));
    std::set<std::string> seen;
    for (const auto& M : cat) {
      CHECK(M.gens() <= dim);
      seen.insert(M.describe());
    }
    CHECK(seen.size() == cat.size());
  }
}

TEST_CASE("catalog over F2[C2] is Krull-Schmidt complete") {
  CatalogBounds b;
  b.max_dim = 4;
  auto cat = catalog_modules(F2C2(), b);
  std::set<std::pair<std::size_t, std::size_t>> types;
  for (const auto& M : cat) types.insert(f2c2_type(M));
  CHECK(types.size() == cat.size());
  std::size_t expected = 0;
  for (std::size_t a = 0; a <= 4; ++a)
    for (std::size_t bb = 0; a + 2 * bb <= 4; ++bb) {
      ++expected;
      CHECK(types.count({a, bb}) == 1);
    }
  CHECK(cat.size() == expected);
}

TEST_CASE("catalog over a prime field") {
  CatalogBounds b;
  b.max_dim = 3;
  auto cat = catalog_modules(base_algebra(BaseRing::prime_field(3)), b);
  REQUIRE(cat.size() == 4);
  for (std::size_t d = 0; d < 4; ++d) CHECK(cat[d].gens() == d);
}

TEST_CASE("catalog is deterministic and records provenance") {
  CatalogBounds b;
  b.max_dim = 2;
  auto x = module_catalog(ZC2(), b), y = module_catalog(ZC2(), b);
  REQUIRE(x.size() == y.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    CHECK(x[k].module == y[k].module);
    CHECK(x[k].provenance == y[k].provenance);
    CHECK_FALSE(x[k].provenance.empty());
  }
}

TEST_CASE("catalog size and dimension caps") {
  CatalogBounds b;
  b.max_dim = 3;
  b.max_entries = 2;
  CHECK(catalog_modules(ZZ(), b).size() == 2);
  ::setenv("ABMC_MAX_DIM", "2", 1);
  CHECK(max_dim_cap() == 2);
  b.max_entries = 256;
  CHECK_THROWS_AS(catalog_modules(ZZ(), b), CatalogTooLarge);
  ::unsetenv("ABMC_MAX_DIM");
  CHECK(max_dim_cap() == 8);
}

TEST_CASE("seeded generator") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
    const long u = a.uniform(-3, 3);
    b.uniform(-3, 3);
    CHECK(u >= -3);
    CHECK(u <= 3);
    CHECK(a.index(7) < 7);
    b.index(7);
  }
  CHECK(differs);
  Rng r(5);
  Morphism f = random_morphism(r, zmod(4), zsum({2, 4}));
  CHECK(f.src() == zmod(4));
  CHECK(f.dst() == zsum({2, 4}));
}
