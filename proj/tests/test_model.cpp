#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "hwdesign/model.hpp"

using namespace hwdesign;

TEST_CASE("vertex total order: infinity < labels < residues") {
  Vertex inf = Vertex::infinity();
  Vertex a = Vertex::named("a"), b = Vertex::named("b");
  Vertex r0 = Vertex::residue({0, 0}), r1 = Vertex::residue({0, 1});
  CHECK(inf < a);
  CHECK(a < b);
  CHECK(b < r0);
  CHECK(r0 < r1);
  CHECK(to_string(inf) == "inf");
}

TEST_CASE("residue_mod reduces negatives coordinatewise") {
  Vertex v = Vertex::residue_mod({-15, 7}, {35, 5});
  CHECK(v.coords == std::vector<int>{20, 2});
}

TEST_CASE("edge stores endpoints sorted") {
  Vertex x = Vertex::residue({3}), y = Vertex::residue({1});
  Edge e(x, y);
  CHECK(e.a == y);
  CHECK(e.b == x);
  CHECK(Edge(x, y) == Edge(y, x));
}

TEST_CASE("cycle canonical form is rotation and reflection invariant") {
  auto V = [](int x) { return Vertex::residue({x}); };
  CycleSeq c1({V(2), V(0), V(4), V(1), V(3)});
  CycleSeq c2({V(4), V(0), V(2), V(3), V(1)});  // reversed, rotated
  CHECK(c1.canonical() == c2.canonical());
  CHECK(c1.canonical().vertices[0] == V(0));
  CHECK(c1.edges().size() == 5);
}

TEST_CASE("vertex space enumerates in sorted order") {
  VertexSpace s;
  s.moduli = {3, 2};
  s.has_infinity = true;
  s.labels = {"b", "a"};
  auto vs = s.vertices();
  CHECK(s.size() == 9);
  CHECK(vs.size() == 9);
  CHECK(std::is_sorted(vs.begin(), vs.end()));
  CHECK(vs[0] == Vertex::infinity());
  CHECK(vs[1] == Vertex::named("a"));
}

static std::map<Edge, int> edge_multiset(const std::vector<Edge>& edges) {
  std::map<Edge, int> m;
  for (const auto& e : edges) ++m[e];
  return m;
}

TEST_CASE("complete host has v(v-1)/2 simple edges") {
  VertexSpace s;
  s.moduli = {7};
  auto edges = HostGraph::complete(s).edges();
  CHECK(edges.size() == 21);
  for (auto& [e, cnt] : edge_multiset(edges)) CHECK(cnt == 1);
}

TEST_CASE("complete minus a one-factor drops exactly the matching") {
  VertexSpace s;
  s.moduli = {6};
  std::vector<Edge> f;
  for (int i = 0; i < 6; i += 2)
    f.push_back(Edge(Vertex::residue({i}), Vertex::residue({i + 1})));
  auto edges = HostGraph::complete_minus_one_factor(s, f).edges();
  CHECK(edges.size() == 15 - 3);
  auto ms = edge_multiset(edges);
  for (const auto& e : f) CHECK(ms.count(e) == 0);
}

TEST_CASE("multipartite host keeps only cross edges") {
  std::vector<std::vector<Vertex>> parts(3);
  for (int p = 0; p < 3; ++p)
    for (int y = 0; y < 3; ++y) parts[p].push_back(Vertex::residue({p, y}));
  auto host = HostGraph::multipartite(parts);
  CHECK(host.vertex_count() == 9);
  CHECK(host.edges().size() == 27);  // 3 * 3*3
}

TEST_CASE("lex cycle host edge counts") {
  // m >= 4: only consecutive parts are joined, m*n^2 edges
  CHECK(HostGraph::lex_cycle(4, 3).edges().size() == 36);
  CHECK(HostGraph::lex_cycle(5, 9).edges().size() == 5 * 81);
  // m = 3: every pair of parts is consecutive exactly once
  CHECK(HostGraph::lex_cycle(3, 5).edges().size() == 75);
}

TEST_CASE("cayley host expands a symmetric connection multiset") {
  // C_9 with steps {+-2}: one 9-cycle worth of edges
  auto host = HostGraph::cayley({9}, {{2}, {7}});
  CHECK(host.edges().size() == 9);
  // non-symmetric connection is rejected
  auto bad = HostGraph::cayley({9}, {{2}});
  CHECK_THROWS_AS(bad.edges(), DesignError);
}

TEST_CASE("develop translates a base class through its orbit") {
  auto V = [](int x, int y) { return Vertex::residue({x, y}); };
  FactorClass base;
  base.kind = FactorKind::TwoFactorUniform;
  base.length = 3;
  base.cycles = {CycleSeq({V(0, 0), V(1, 0), V(2, 0)})};
  auto classes = develop(base, DevelopmentRule::translation({0, 1}, 4), {3, 4});
  REQUIRE(classes.size() == 4);
  // class i is the base shifted by i in the level coordinate
  CHECK(classes[2].cycles[0].canonical() ==
        CycleSeq({V(0, 2), V(1, 2), V(2, 2)}).canonical());
  // labels and infinity stay put
  FactorClass named;
  named.kind = FactorKind::TwoFactorUniform;
  named.length = 3;
  named.cycles = {CycleSeq({Vertex::named("a"), V(0, 0), V(1, 1)})};
  auto fixed = develop(named, DevelopmentRule::translation({0, 1}, 4), {3, 4});
  CHECK(fixed[3].cycles[0].canonical().vertices[0] == Vertex::named("a"));
}

TEST_CASE("develop carries the missing vertex of an almost parallel class") {
  auto V = [](int x) { return Vertex::residue({x}); };
  FactorClass base;
  base.kind = FactorKind::AlmostParallel;
  base.length = 3;
  base.missing = V(0);
  base.cycles = {CycleSeq({V(1), V(2), V(3)})};
  auto classes = develop(base, DevelopmentRule::translation({1}, 4), {7});
  CHECK(classes[3].missing == V(3));
}

TEST_CASE("measure_profile aggregates and sorts") {
  auto V = [](int x) { return Vertex::residue({x}); };
  FactorClass tri;
  tri.kind = FactorKind::TwoFactorUniform;
  tri.length = 3;
  tri.cycles = {CycleSeq({V(0), V(1), V(2)})};
  FactorClass one;
  one.kind = FactorKind::OneFactor;
  one.pairs = {Edge(V(0), V(1))};
  Profile p = measure_profile({tri, tri, one});
  REQUIRE(p.size() == 2);
  CHECK(p[0].kind == FactorKind::TwoFactorUniform);
  CHECK(p[0].count == 2);
  CHECK(p[1].kind == FactorKind::OneFactor);
  CHECK(p[1].count == 1);
}

TEST_CASE("factor class edges cover each cycle edge once") {
  auto V = [](int x, int y) { return Vertex::residue({x, y}); };
  FactorClass f;
  f.kind = FactorKind::TwoFactorUniform;
  f.length = 3;
  for (int y = 0; y < 3; ++y)
    f.cycles.push_back(CycleSeq({V(0, y), V(1, y), V(2, y)}));
  CHECK(f.edges().size() == 9);
  auto cover = f.covered_vertices();
  CHECK(cover.size() == 9);
  CHECK(std::set<Vertex>(cover.begin(), cover.end()).size() == 9);
}
