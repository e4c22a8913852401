#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <set>

#include "hwdesign/search.hpp"
#include "hwdesign/verify.hpp"

using namespace hwdesign;
using namespace hwdesign::search;

TEST_CASE("factor_cycles splits K_5 into two pentagon factors") {
  std::vector<std::array<int, 2>> edges;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) edges.push_back({a, b});
  auto sol = factor_cycles(5, edges, {5, 5});
  REQUIRE(sol);
  CHECK(sol->size() == 2);
  std::multiset<std::array<int, 2>> used;
  for (const auto& fac : *sol) {
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].size() == 5);
    for (size_t i = 0; i < 5; ++i) {
      int a = fac[0][i], b = fac[0][(i + 1) % 5];
      used.insert({std::min(a, b), std::max(a, b)});
    }
  }
  // exact partition of the edge set
  CHECK(used == std::multiset<std::array<int, 2>>(edges.begin(), edges.end()));
}

TEST_CASE("factor_cycles respects infeasible plans") {
  std::vector<std::array<int, 2>> edges;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) edges.push_back({a, b});
  CHECK_FALSE(factor_cycles(5, edges, {5, 5, 5}));  // too many factors
}

TEST_CASE("resolvable_cycles verifies its own output") {
  VertexSpace s;
  s.moduli = {9};
  auto host = HostGraph::complete(s);
  auto classes = resolvable_cycles(host, {9, 9, 9, 9});
  REQUIRE(classes);
  Certificate cert;
  cert.host = host;
  cert.classes = *classes;
  cert.profile = measure_profile(cert.classes);
  CHECK(check_certificate(cert).valid);
}

TEST_CASE("search is deterministic for a fixed seed") {
  VertexSpace s;
  s.moduli = {9};
  auto host = HostGraph::complete(s);
  Budget b;
  b.seed = 17;
  auto first = resolvable_cycles(host, {3, 9, 9, 9}, b);
  auto second = resolvable_cycles(host, {3, 9, 9, 9}, b);
  REQUIRE(first);
  REQUIRE(second);
  CHECK(*first == *second);
}

TEST_CASE("orbit_cycles tiles a factorization from one base factor") {
  // five 9-cycle factors on Z_5 x Z_9 with steps {+-1} x {0,+-1,+-2},
  // tiled by the order-5 column translation
  const int m = 5, n = 9, N = m * n;
  auto id = [&](int x, int y) { return ((x % m + m) % m) * n + ((y % n + n) % n); };
  std::set<std::array<int, 2>> eset;
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < n; ++y)
      for (int d : {0, 1, -1, 2, -2}) {
        int a = id(x, y), b = id(x + 1, y + d);
        eset.insert({std::min(a, b), std::max(a, b)});
      }
  std::vector<std::array<int, 2>> edges(eset.begin(), eset.end());
  REQUIRE(edges.size() == 225);
  std::vector<int> perm(N);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < n; ++y) perm[id(x, y)] = id(x + 1, y);
  auto sol = orbit_cycles(N, edges, perm, n);
  REQUIRE(sol);
  CHECK(sol->size() == 5);
  std::multiset<std::array<int, 2>> used;
  for (const auto& fac : *sol)
    for (const auto& cyc : fac)
      for (size_t i = 0; i < cyc.size(); ++i) {
        int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
        used.insert({std::min(a, b), std::max(a, b)});
      }
  CHECK(used == std::multiset<std::array<int, 2>>(edges.begin(), edges.end()));
}

TEST_CASE("frame search: necessary conditions and a tiny instance") {
  auto bad = frame(6, 6, 3);
  CHECK(bad.status != BuildStatus::Built);  // the stated exception
  auto r = frame(3, 2, 4);
  REQUIRE(r.ok());
  CHECK(check_frame(*r.cert, 3).valid);
}

TEST_CASE("fixture cache round-trips through the directory") {
  VertexSpace s;
  s.moduli = {9};
  auto host = HostGraph::complete(s);
  auto classes = resolvable_cycles(host, {9, 9, 9, 9});
  REQUIRE(classes);
  Certificate cert;
  cert.host = host;
  cert.classes = *classes;
  cert.profile = measure_profile(cert.classes);
  cert.provenance.name = "cache_test";
  cache_store("unit_cache_test", cert);
  auto back = cache_lookup("unit_cache_test");
  REQUIRE(back);
  CHECK(back->classes == cert.classes);
  CHECK_FALSE(cache_lookup("unit_cache_test_missing"));
  std::remove((cache_dir() + "/unit_cache_test.cert").c_str());
}

TEST_CASE("hamilton_pair_circulant returns two disjoint spanning cycles") {
  auto got = hamilton_pair_circulant(15, 3, 4);
  REQUIRE(got);
  for (const auto& h : {got->first, got->second}) {
    CHECK(h.size() == 15);
    CHECK(std::set<int>(h.begin(), h.end()).size() == 15);
    for (size_t i = 0; i < h.size(); ++i) {
      int d = (h[(i + 1) % 15] - h[i] + 15) % 15;
      CHECK((d == 3 || d == 4 || d == 11 || d == 12));
    }
  }
  // the two cycles share no edge
  std::set<std::pair<int, int>> e1;
  for (size_t i = 0; i < 15; ++i) {
    int a = got->first[i], b = got->first[(i + 1) % 15];
    e1.insert({std::min(a, b), std::max(a, b)});
  }
  for (size_t i = 0; i < 15; ++i) {
    int a = got->second[i], b = got->second[(i + 1) % 15];
    CHECK_FALSE(e1.count({std::min(a, b), std::max(a, b)}));
  }
}
