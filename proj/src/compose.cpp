#include "hwdesign/compose.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <set>
#include <sstream>

#include "hwdesign/arcs.hpp"
#include "hwdesign/cayley.hpp"
#include "hwdesign/search.hpp"
#include "hwdesign/verify.hpp"

namespace hwdesign {

std::string to_string(BuildStatus s) {
  switch (s) {
    case BuildStatus::Built: return "BUILT";
    case BuildStatus::Nonexistent: return "NONEXISTENT";
    case BuildStatus::Open: return "OPEN";
    case BuildStatus::NotFound: return "NOT_FOUND";
    case BuildStatus::MissingIngredient: return "MISSING_INGREDIENT";
    case BuildStatus::NecessaryFail: return "NECESSARY_FAIL";
  }
  return "?";
}

}  // namespace hwdesign

namespace hwdesign::compose {

namespace {

CycleSeq cyc(std::vector<Vertex> vs) { return CycleSeq(std::move(vs)); }

FactorClass uniform(int length, std::vector<CycleSeq> cycles) {
  FactorClass f;
  f.kind = FactorKind::TwoFactorUniform;
  f.length = length;
  f.cycles = std::move(cycles);
  return f.canonical();
}

// One class holding `count` translates of a single base cycle.
FactorClass orbit(const CycleSeq& base, const std::vector<int>& step, int count,
                  const std::vector<int>& moduli, int length) {
  std::vector<CycleSeq> cs;
  for (int s = 0; s < count; ++s) {
    std::vector<int> off(step.size());
    for (size_t j = 0; j < off.size(); ++j)
      off[j] = imod(static_cast<long long>(step[j]) * s, moduli[j]);
    cs.push_back(translate_cycle(base, off, {}, moduli));
  }
  return uniform(length, std::move(cs));
}

BuildResult finish(HostGraph host, std::vector<FactorClass> classes, Provenance prov) {
  Certificate cert;
  cert.host = std::move(host);
  for (auto& f : classes) cert.classes.push_back(f.canonical());
  cert.profile = measure_profile(cert.classes);
  cert.provenance = std::move(prov);
  auto report = check_certificate(cert);
  if (!report.valid)
    return BuildResult::fail(BuildStatus::NotFound,
                             "assembled object failed verification: " + report.summary());
  return BuildResult::built(std::move(cert));
}

FactorClass apply_map(const FactorClass& f, const std::map<Vertex, Vertex>& mp) {
  auto at = [&](const Vertex& v) {
    auto it = mp.find(v);
    if (it == mp.end()) throw DesignError("REJECT_SHAPE", "vertex outside the relabeling map");
    return it->second;
  };
  FactorClass out;
  out.kind = f.kind;
  out.length = f.length;
  if (f.missing) out.missing = at(*f.missing);
  for (const auto& c : f.cycles) {
    std::vector<Vertex> vs;
    for (const auto& v : c.vertices) vs.push_back(at(v));
    out.cycles.push_back(CycleSeq(std::move(vs)));
  }
  for (const auto& e : f.pairs) out.pairs.push_back(Edge(at(e.a), at(e.b)));
  return out.canonical();
}

// ---------------------------------------------------------------------------
// fixtures

// (6,5) split of the tripartite blow-up on (Z_6 x Z_5) + {a,b,c}.
Certificate fixture_tri33() {
  const std::vector<int> mod{6, 5};
  auto V = [&](int x, int y) { return Vertex::residue({imod(x, 6), imod(y, 5)}); };
  auto T = [&](int x1, int y1, int x2, int y2, int x3, int y3) {
    return cyc({V(x1, y1), V(x2, y2), V(x3, y3)});
  };
  Vertex a = Vertex::named("a"), b = Vertex::named("b"), c = Vertex::named("c");

  std::vector<std::vector<Vertex>> parts(3);
  parts[0].push_back(a);
  parts[1].push_back(b);
  parts[2].push_back(c);
  for (int y = 0; y < 5; ++y) {
    parts[0].push_back(V(2, y));
    parts[0].push_back(V(5, y));
    parts[1].push_back(V(0, y));
    parts[1].push_back(V(3, y));
    parts[2].push_back(V(1, y));
    parts[2].push_back(V(4, y));
  }

  FactorClass p;
  p.kind = FactorKind::TwoFactorUniform;
  p.length = 3;
  p.cycles = {cyc({a, V(0, 0), V(4, 4)}), cyc({b, V(2, 3), V(1, 0)}),
              cyc({c, V(2, 4), V(3, 1)}), T(1, 1, 3, 3, 5, 0),
              T(2, 2, 4, 0, 0, 2),        T(0, 1, 5, 2, 1, 4),
              T(1, 2, 2, 1, 3, 2),        T(3, 4, 2, 0, 4, 2),
              T(5, 1, 0, 3, 4, 3),        T(1, 3, 0, 4, 5, 4),
              T(3, 0, 4, 1, 5, 3)};
  std::vector<FactorClass> classes =
      develop(p, DevelopmentRule::translation({0, 1}, 5), mod);

  FactorClass last;
  last.kind = FactorKind::TwoFactorUniform;
  last.length = 3;
  last.cycles.push_back(cyc({a, b, c}));
  for (int i = 0; i < 5; ++i) {
    last.cycles.push_back(T(0, i, 1, 2 + i, 2, 4 + i));
    last.cycles.push_back(T(3, 3 + i, 4, 2 + i, 5, 3 + i));
  }
  classes.push_back(last.canonical());

  FactorClass q;
  q.kind = FactorKind::TwoFactorUniform;
  q.length = 11;
  q.cycles = {
      cyc({a, V(1, 1), V(5, 1), V(3, 0), V(1, 4), V(0, 4), V(4, 1), V(2, 2),
           V(3, 2), V(1, 3), V(3, 1)}),
      cyc({b, V(5, 0), V(0, 1), V(1, 2), V(2, 3), V(4, 3), V(0, 2), V(2, 4),
           V(0, 3), V(2, 1), V(4, 2)}),
      cyc({c, V(0, 0), V(5, 2), V(1, 0), V(2, 0), V(3, 3), V(4, 0), V(5, 4),
           V(4, 4), V(3, 4), V(5, 3)})};
  for (auto& f : develop(q, DevelopmentRule::translation({0, 1}, 5), mod))
    classes.push_back(std::move(f));

  Certificate cert;
  cert.host = HostGraph::multipartite(parts);
  cert.classes = std::move(classes);
  return cert;
}

// Five triangle factors on the steps {+-1} x {0,+-1,+-2} of Z_3 x Z_n,
// shared by the tripartite (8,5) and complete (8,11) designs.
std::vector<FactorClass> triangle_block(int n) {
  cayley::DiffRequest req;
  req.kind = cayley::DiffKind::FiveCm;
  req.i = 1;
  req.a = 1;
  auto five = cayley::difference_factorization(3, n, req);
  if (!five) throw DesignError("REJECT_SHAPE", "triangle block search failed");
  return *five;
}

// (8,5) split of C_3[13], on lex coordinates (position, level mod 13).
Certificate fixture_tri39() {
  const std::vector<int> mod{3, 13};
  // paper-style vertex x_i = (x mod 13, part i) mapped to lex (i, x)
  auto V = [&](int x, int i) { return Vertex::residue({imod(i, 3), imod(x, 13)}); };

  std::vector<FactorClass> classes = triangle_block(13);

  FactorClass f13 = orbit(cyc({V(0, 0), V(4, 1), V(7, 2)}), {0, 1}, 13, mod, 3);
  for (auto& f : develop(f13, DevelopmentRule::translation({1, 0}, 3), mod))
    classes.push_back(std::move(f));

  const int qd[5][13][2] = {
      {{0, 0}, {5, 2}, {10, 1}, {2, 2}, {7, 1}, {12, 0}, {4, 1}, {9, 0}, {1, 1},
       {6, 0}, {11, 2}, {3, 0}, {8, 2}},
      {{0, 0}, {7, 1}, {1, 2}, {4, 1}, {11, 2}, {3, 1}, {6, 0}, {10, 2}, {2, 1},
       {8, 0}, {12, 2}, {9, 0}, {5, 1}},
      {{0, 0}, {10, 1}, {3, 0}, {7, 2}, {12, 0}, {2, 2}, {9, 0}, {1, 2}, {6, 0},
       {11, 1}, {5, 2}, {8, 1}, {4, 2}},
      {{0, 0}, {9, 1}, {3, 2}, {8, 0}, {11, 2}, {1, 1}, {10, 2}, {4, 0}, {7, 2},
       {2, 1}, {5, 0}, {12, 1}, {6, 2}},
      {{0, 0}, {3, 2}, {12, 0}, {4, 2}, {9, 0}, {6, 1}, {2, 2}, {11, 0}, {7, 1},
       {10, 0}, {5, 2}, {1, 0}, {8, 1}}};
  for (const auto& row : qd) {
    std::vector<Vertex> vs;
    for (const auto& p : row) vs.push_back(V(p[0], p[1]));
    classes.push_back(orbit(cyc(vs), {1, 0}, 3, mod, 13));
  }

  Certificate cert;
  cert.host = HostGraph::lex_cycle(3, 13);
  cert.classes = std::move(classes);
  return cert;
}

// (8,7) split of C_3[15]; Z_45 vertex x becomes lex (x mod 3, x div 3).
Certificate fixture_tri45() {
  const std::vector<int> mod{3, 15};
  auto V = [&](int x) {
    x = imod(x, 45);
    return Vertex::residue({x % 3, x / 3});
  };
  auto lift = [&](std::initializer_list<int> xs) {
    std::vector<Vertex> vs;
    for (int x : xs) vs.push_back(V(x));
    return cyc(std::move(vs));
  };

  std::vector<FactorClass> classes;
  // +3 on Z_45 is (0,+1) in lex coordinates
  const int pd[8][3] = {{0, 1, 2},   {0, 4, 8},   {0, 5, 7},   {0, 10, 17},
                        {0, 11, 16}, {0, 13, 23}, {0, 14, 22}, {0, 19, 32}};
  for (const auto& row : pd)
    classes.push_back(orbit(lift({row[0], row[1], row[2]}), {0, 1}, 15, mod, 3));

  // +15 on Z_45 is (0,+5) in lex coordinates
  const int qd[7][15] = {
      {0, 34, 6, 41, 3, 43, 9, 44, 10, 27, 2, 16, 5, 22, 38},
      {0, 20, 1, 3, 2, 19, 21, 14, 43, 26, 40, 9, 38, 42, 37},
      {0, 28, 2, 12, 1, 18, 7, 21, 5, 9, 8, 19, 44, 25, 41},
      {0, 29, 1, 17, 28, 3, 23, 4, 20, 39, 22, 42, 26, 6, 40},
      {0, 31, 6, 32, 3, 29, 9, 34, 11, 37, 23, 42, 40, 20, 43},
      {0, 25, 2, 9, 1, 6, 5, 19, 33, 23, 43, 12, 11, 22, 44},
      {0, 26, 1, 23, 40, 3, 44, 13, 21, 17, 37, 39, 34, 42, 35}};
  for (const auto& row : qd) {
    std::vector<Vertex> vs;
    for (int x : row) vs.push_back(V(x));
    classes.push_back(orbit(cyc(vs), {0, 5}, 3, mod, 15));
  }

  Certificate cert;
  cert.host = HostGraph::lex_cycle(3, 15);
  cert.classes = std::move(classes);
  return cert;
}

// (6,10) split of the complete graph on (Z_6 x Z_5) + {a,b,c}.
Certificate fixture_k33() {
  const std::vector<int> mod{6, 5};
  auto V = [&](int x, int y) { return Vertex::residue({imod(x, 6), imod(y, 5)}); };
  auto T = [&](int x1, int y1, int x2, int y2, int x3, int y3) {
    return cyc({V(x1, y1), V(x2, y2), V(x3, y3)});
  };
  Vertex a = Vertex::named("a"), b = Vertex::named("b"), c = Vertex::named("c");

  FactorClass p;
  p.kind = FactorKind::TwoFactorUniform;
  p.length = 3;
  p.cycles = {cyc({a, V(1, 1), V(4, 1)}), cyc({b, V(2, 2), V(5, 2)}),
              cyc({c, V(0, 0), V(3, 0)}), T(3, 3, 5, 0, 1, 4),
              T(4, 4, 0, 3, 2, 0),        T(0, 1, 2, 4, 3, 2),
              T(1, 2, 2, 3, 2, 1),        T(3, 4, 4, 0, 4, 3),
              T(5, 1, 4, 2, 5, 3),        T(0, 2, 3, 1, 5, 4),
              T(1, 3, 0, 4, 1, 0)};
  std::vector<FactorClass> classes =
      develop(p, DevelopmentRule::translation({0, 1}, 5), mod);

  FactorClass last;
  last.kind = FactorKind::TwoFactorUniform;
  last.length = 3;
  last.cycles.push_back(cyc({a, b, c}));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j)
      last.cycles.push_back(T(3 * j, i, 3 * j + 1, 3 + i, 3 * j + 2, i));
  classes.push_back(last.canonical());

  FactorClass q;
  q.kind = FactorKind::TwoFactorUniform;
  q.length = 11;
  q.cycles = {
      cyc({a, V(2, 3), V(1, 3), V(0, 3), V(5, 1), V(4, 3), V(3, 1), V(2, 0),
           V(3, 4), V(3, 0), V(3, 2)}),
      cyc({b, V(0, 2), V(2, 1), V(5, 4), V(0, 4), V(4, 1), V(4, 2), V(1, 0),
           V(5, 2), V(5, 3), V(1, 4)}),
      cyc({c, V(1, 1), V(4, 0), V(0, 0), V(3, 3), V(1, 2), V(5, 0), V(2, 4),
           V(4, 4), V(0, 1), V(2, 2)})};
  for (auto& f : develop(q, DevelopmentRule::translation({3, 1}, 10), mod))
    classes.push_back(std::move(f));

  VertexSpace space;
  space.moduli = mod;
  space.labels = {"a", "b", "c"};
  Certificate cert;
  cert.host = HostGraph::complete(space);
  cert.classes = std::move(classes);
  return cert;
}

// (9,8) split of the complete graph on Z_5 x Z_7.
Certificate fixture_k35() {
  const std::vector<int> mod{5, 7};
  auto V = [&](int x, int y) { return Vertex::residue({imod(x, 5), imod(y, 7)}); };
  auto C5 = [&](int x1, int y1, int x2, int y2, int x3, int y3, int x4, int y4,
                int x5, int y5) {
    return cyc({V(x1, y1), V(x2, y2), V(x3, y3), V(x4, y4), V(x5, y5)});
  };

  FactorClass p;
  p.kind = FactorKind::TwoFactorUniform;
  p.length = 5;
  p.cycles = {C5(0, 0, 1, 1, 2, 2, 3, 3, 4, 4), C5(0, 5, 2, 0, 4, 2, 1, 6, 3, 1),
              C5(0, 3, 1, 2, 2, 5, 0, 1, 2, 1), C5(1, 4, 2, 3, 3, 6, 4, 5, 0, 6),
              C5(4, 0, 3, 4, 0, 4, 3, 5, 2, 6), C5(1, 0, 4, 1, 2, 4, 3, 2, 4, 6),
              C5(4, 3, 1, 5, 0, 2, 3, 0, 1, 3)};
  std::vector<FactorClass> classes =
      develop(p, DevelopmentRule::translation({0, 1}, 7), mod);

  // two extra pentagon factors: level translates of one cycle each
  classes.push_back(orbit(C5(0, 0, 4, 2, 2, 2, 1, 4, 3, 4), {0, 1}, 7, mod, 5));
  classes.push_back(orbit(C5(0, 0, 1, 4, 3, 3, 2, 3, 4, 1), {0, 1}, 7, mod, 5));

  FactorClass q;
  q.kind = FactorKind::TwoFactorUniform;
  q.length = 7;
  q.cycles = {cyc({V(0, 0), V(0, 3), V(2, 2), V(2, 5), V(1, 1), V(1, 4), V(3, 2)}),
              cyc({V(3, 3), V(3, 6), V(1, 5), V(0, 5), V(2, 1), V(4, 4), V(1, 0)}),
              cyc({V(1, 6), V(2, 6), V(2, 0), V(0, 6), V(4, 6), V(4, 5), V(4, 1)}),
              cyc({V(3, 1), V(4, 3), V(2, 4), V(1, 2), V(1, 3), V(0, 1), V(0, 2)}),
              cyc({V(4, 2), V(3, 4), V(3, 5), V(2, 3), V(3, 0), V(4, 0), V(0, 4)})};
  for (auto& f : develop(q, DevelopmentRule::translation({0, 1}, 7), mod))
    classes.push_back(std::move(f));

  // the leftover level steps +-2 close into one 7-cycle per column
  FactorClass lastq;
  lastq.kind = FactorKind::TwoFactorUniform;
  lastq.length = 7;
  for (int x = 0; x < 5; ++x)
    lastq.cycles.push_back(cyc({V(x, 0), V(x, 2), V(x, 4), V(x, 6), V(x, 1),
                                V(x, 3), V(x, 5)}));
  classes.push_back(lastq.canonical());

  VertexSpace space;
  space.moduli = mod;
  Certificate cert;
  cert.host = HostGraph::complete(space);
  cert.classes = std::move(classes);
  return cert;
}

// (8,11) split of the complete graph on Z_13 x Z_3.
Certificate fixture_k39() {
  const std::vector<int> mod{13, 3};
  auto V = [&](int x, int i) { return Vertex::residue({imod(x, 13), imod(i, 3)}); };

  // the shared triangle block lives on (part, level); swap into (x, part)
  std::map<Vertex, Vertex> swap;
  for (int i = 0; i < 3; ++i)
    for (int x = 0; x < 13; ++x) swap[Vertex::residue({i, x})] = V(x, i);
  std::vector<FactorClass> classes;
  for (const auto& f : triangle_block(13)) classes.push_back(apply_map(f, swap));

  FactorClass f13 = orbit(cyc({V(0, 0), V(4, 1), V(7, 2)}), {1, 0}, 13, mod, 3);
  for (auto& f : develop(f13, DevelopmentRule::translation({0, 1}, 3), mod))
    classes.push_back(std::move(f));

  const int qd[11][13][2] = {
      {{0, 0}, {4, 2}, {2, 2}, {6, 1}, {1, 1}, {3, 1}, {11, 0}, {7, 1}, {5, 1},
       {8, 0}, {12, 2}, {9, 0}, {10, 0}},
      {{0, 0}, {5, 0}, {3, 0}, {7, 2}, {2, 2}, {10, 2}, {4, 0}, {1, 1}, {6, 2},
       {11, 0}, {12, 0}, {9, 0}, {8, 0}},
      {{0, 0}, {9, 1}, {2, 1}, {5, 0}, {4, 0}, {8, 0}, {6, 0}, {10, 0}, {1, 2},
       {11, 2}, {7, 2}, {12, 2}, {3, 2}},
      {{0, 0}, {3, 0}, {6, 0}, {1, 1}, {4, 1}, {9, 2}, {5, 2}, {10, 2}, {12, 2},
       {7, 1}, {8, 1}, {2, 2}, {11, 0}},
      {{0, 0}, {5, 2}, {10, 1}, {1, 1}, {9, 1}, {3, 1}, {6, 0}, {11, 2}, {8, 0},
       {2, 0}, {7, 1}, {12, 0}, {4, 0}},
      {{0, 0}, {7, 1}, {10, 1}, {8, 1}, {11, 1}, {3, 0}, {4, 0}, {9, 0}, {1, 1},
       {2, 1}, {5, 1}, {12, 1}, {6, 2}},
      {{0, 0}, {10, 1}, {2, 0}, {3, 0}, {11, 0}, {5, 1}, {8, 1}, {4, 2}, {12, 1},
       {6, 1}, {9, 1}, {1, 0}, {7, 0}},
      {{0, 0}, {12, 0}, {2, 0}, {9, 1}, {4, 2}, {11, 0}, {10, 0}, {6, 1}, {7, 1},
       {3, 1}, {8, 2}, {1, 1}, {5, 1}},
      {{0, 0}, {2, 0}, {6, 0}, {5, 0}, {10, 1}, {7, 2}, {4, 0}, {12, 1}, {8, 1},
       {3, 2}, {9, 1}, {11, 1}, {1, 0}},
      {{0, 0}, {8, 2}, {1, 2}, {12, 2}, {3, 1}, {10, 1}, {2, 2}, {7, 1}, {4, 1},
       {6, 1}, {11, 1}, {5, 1}, {9, 0}},
      {{0, 0}, {6, 0}, {9, 2}, {7, 2}, {1, 0}, {5, 2}, {12, 0}, {2, 2}, {11, 2},
       {4, 2}, {10, 2}, {3, 1}, {8, 1}}};
  for (const auto& row : qd) {
    std::vector<Vertex> vs;
    for (const auto& p : row) vs.push_back(V(p[0], p[1]));
    classes.push_back(orbit(cyc(vs), {0, 1}, 3, mod, 13));
  }

  VertexSpace space;
  space.moduli = mod;
  Certificate cert;
  cert.host = HostGraph::complete(space);
  cert.classes = std::move(classes);
  return cert;
}

// ---------------------------------------------------------------------------
// classical ingredients

BuildResult hamilton_complete(int v) {
  if (v < 3 || v % 2 == 0)
    throw DesignError("REJECT_PARAMS", "spanning-cycle split needs odd order >= 3");
  int w = v - 1, r = w / 2;
  VertexSpace space;
  space.moduli = {w};
  space.has_infinity = true;

  // zigzag 0, 1, -1, 2, -2, ... covers each nonzero step size exactly once
  std::vector<int> zig{0};
  for (int j = 1; static_cast<int>(zig.size()) < w; ++j) {
    zig.push_back(j);
    if (static_cast<int>(zig.size()) < w) zig.push_back(imod(-j, w));
  }

  std::vector<FactorClass> classes;
  for (int i = 0; i < r; ++i) {
    std::vector<Vertex> vs{Vertex::infinity()};
    for (int z : zig) vs.push_back(Vertex::residue({imod(z + i, w)}));
    classes.push_back(uniform(v, {cyc(std::move(vs))}));
  }

  Provenance prov;
  prov.name = "hamilton_complete";
  prov.param("v", v);
  return finish(HostGraph::complete(space), std::move(classes), std::move(prov));
}

// Rebuild a lex-cycle certificate as the same split of the multipartite host
// with parts given by the lex position (only sound for 3 parts, where every
// pair of parts is consecutive).
Certificate rehost_tripartite(const Certificate& cert) {
  std::vector<std::vector<Vertex>> parts(3);
  for (const auto& v : cert.host.vertex_set()) parts[v.coords[0]].push_back(v);
  Certificate out = cert;
  out.host = HostGraph::multipartite(parts);
  return out;
}

HostGraph multipartite_host(int u, int g) {
  std::vector<std::vector<Vertex>> parts(u);
  for (int p = 0; p < u; ++p)
    for (int y = 0; y < g; ++y) parts[p].push_back(Vertex::residue({p, y}));
  return HostGraph::multipartite(parts);
}

BuildResult lex_cycle_factor(int m, int n) {
  if (m < 3 || n < 1) throw DesignError("REJECT_PARAMS", "degenerate lex cycle");
  if ((m == 3 && n == 6) || (n == 2 && m % 2 == 1))
    return BuildResult::fail(BuildStatus::Nonexistent,
                             "no short-cycle split of this lex cycle");
  if (n == 1) {
    std::vector<Vertex> vs;
    for (int p = 0; p < m; ++p) vs.push_back(Vertex::residue({p, 0}));
    Provenance prov;
    prov.name = "lex_cycle_factor";
    return finish(HostGraph::lex_cycle(m, 1), {uniform(m, {cyc(vs)})}, std::move(prov));
  }
  if (n % 2 == 1) return cayley::hw_lex(m, n, n);

  HostGraph host = HostGraph::lex_cycle(m, n);
  std::ostringstream key;
  key << "lex_factor_m" << m << "_n" << n;
  if (auto cached = search::cache_lookup(key.str()))
    if (cached->host == host && check_certificate(*cached).valid)
      return BuildResult::built(*cached);
  auto found = search::resolvable_cycles(host, std::vector<int>(n, m));
  if (!found)
    return BuildResult::fail(BuildStatus::NotFound, "no short-cycle split found in budget");
  Provenance prov;
  prov.name = "lex_cycle_factor";
  prov.param("m", m);
  prov.param("n", n);
  auto r = finish(host, std::move(*found), std::move(prov));
  if (r.ok()) search::cache_store(key.str(), *r.cert);
  return r;
}

}  // namespace

BuildResult resolvable_kug(int k, int u, int g) {
  if (k < 3 || u < 1 || g < 1) throw DesignError("REJECT_PARAMS", "degenerate host");
  long long v = static_cast<long long>(u) * g;
  if ((static_cast<long long>(g) * (u - 1)) % 2 != 0)
    return BuildResult::fail(BuildStatus::NecessaryFail, "odd vertex degree");
  if (v % k != 0)
    return BuildResult::fail(BuildStatus::NecessaryFail,
                             "cycle length does not divide the order");
  if (u == 2 && k % 2 != 0)
    return BuildResult::fail(BuildStatus::NecessaryFail,
                             "an odd cycle cannot alternate between two parts");
  if ((k == 3 && u == 3 && g == 2) || (k == 3 && u == 6 && g == 2) ||
      (k == 3 && u == 3 && g == 6) || (k == 6 && u == 2 && g == 6))
    return BuildResult::fail(BuildStatus::Nonexistent, "known exceptional host");

  if (g == 1 && k == u) return hamilton_complete(u);

  if (u == 3 && k == 3) {
    auto r = lex_cycle_factor(3, g);
    if (!r.ok()) return r;
    return BuildResult::built(rehost_tripartite(*r.cert));
  }
  if (u == 3 && k == 3 * g) {
    auto r = cayley::lex_hamilton(3, g);
    if (!r.ok()) return r;
    return BuildResult::built(rehost_tripartite(*r.cert));
  }

  // part-sized cycles via blow-up: spanning cycles of K_u filled with
  // short-cycle splits of the blown cycle
  if (k == u && g > 1 && u % 2 == 1) {
    auto base = hamilton_complete(u);
    auto fill = lex_cycle_factor(u, g);
    if (base.ok() && fill.ok()) {
      std::vector<Certificate> fills(base.cert->classes.size(), *fill.cert);
      auto r = l351(*base.cert, fills);
      if (r.ok()) return r;
    }
  }

  HostGraph host = g == 1 ? HostGraph::complete(VertexSpace{{u}, false, {}})
                          : multipartite_host(u, g);
  std::ostringstream key;
  key << "kug_k" << k << "_u" << u << "_g" << g;
  if (auto cached = search::cache_lookup(key.str()))
    if (cached->host == host && check_certificate(*cached).valid)
      return BuildResult::built(*cached);
  int count = static_cast<int>(static_cast<long long>(g) * (u - 1) / 2);
  auto found = search::resolvable_cycles(host, std::vector<int>(count, k));
  if (!found)
    return BuildResult::fail(BuildStatus::NotFound,
                             "no uniform split found within the search budget");
  Provenance prov;
  prov.name = "resolvable_kug";
  prov.param("k", k);
  prov.param("u", u);
  prov.param("g", g);
  auto r = finish(host, std::move(*found), std::move(prov));
  if (r.ok()) search::cache_store(key.str(), *r.cert);
  return r;
}

Certificate fixture(const std::string& name) {
  Certificate cert;
  if (name == "L4.1") cert = fixture_tri33();
  else if (name == "L4.2") cert = fixture_tri39();
  else if (name == "L4.3") cert = fixture_tri45();
  else if (name == "L4.5") cert = fixture_k33();
  else if (name == "L4.6") cert = fixture_k35();
  else if (name == "L4.7") cert = fixture_k39();
  else if (name == "L3.11") {
    auto r = cayley::construction_2l(17, 1, 14);
    if (!r.ok()) throw DesignError("REJECT_SHAPE", "row block assembly failed: " + r.detail);
    cert = *r.cert;
  } else {
    throw DesignError("REJECT_PARAMS", "unknown fixture name: " + name);
  }
  cert.profile = measure_profile(cert.classes);
  Provenance prov;
  prov.name = "fixture";
  prov.param("name", name);
  if (name == "L3.11") prov.ingredients = cert.provenance.ingredients;
  cert.provenance = std::move(prov);
  auto report = check_certificate(cert);
  if (!report.valid)
    throw DesignError("REJECT_SHAPE", "fixture " + name + " failed verification: " +
                                          report.summary());
  return cert;
}

BuildResult classical(const ClassicalRequest& req) {
  switch (req.kind) {
    case ClassicalRequest::Kind::HamiltonComplete:
      return hamilton_complete(req.v);
    case ClassicalRequest::Kind::MultipartiteCycles:
      return resolvable_kug(req.k, req.u, req.g);
    case ClassicalRequest::Kind::LexCycleFactor:
      return lex_cycle_factor(req.m, req.n);
    case ClassicalRequest::Kind::LexHamilton:
      return cayley::lex_hamilton(req.m, req.n);
  }
  throw DesignError("REJECT_PARAMS", "unknown classical request");
}

// ---------------------------------------------------------------------------
// compositors

namespace {

std::vector<std::vector<Vertex>> parts_of(const HostGraph& host) {
  if (host.kind == HostKind::Multipartite) return host.parts;
  if (host.kind == HostKind::Complete) {
    std::vector<std::vector<Vertex>> parts;
    for (const auto& v : host.vertex_set()) parts.push_back({v});
    return parts;
  }
  throw DesignError("REJECT_HOST", "need a complete or multipartite outer host");
}

void require_valid(const Certificate& cert, const char* who) {
  auto report = check_certificate(cert);
  if (!report.valid)
    throw DesignError("REJECT_SHAPE",
                      std::string(who) + " input is invalid: " + report.summary());
}

// Splits a certificate into its 2-factor classes and (at most one) perfect
// matching, taking a deleted host 1-factor as the matching.
struct SplitClasses {
  std::vector<FactorClass> factors;
  std::vector<Edge> matching;
  bool has_matching = false;
};

SplitClasses split_classes(const Certificate& cert) {
  SplitClasses out;
  if (cert.host.kind == HostKind::CompleteMinusOneFactor) {
    out.matching = cert.host.one_factor;
    out.has_matching = true;
  }
  for (const auto& f : cert.classes) {
    if (f.kind == FactorKind::OneFactor) {
      if (out.has_matching)
        throw DesignError("REJECT_PROFILE", "more than one perfect matching");
      out.matching = f.pairs;
      out.has_matching = true;
    } else {
      out.factors.push_back(f);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const FactorClass& a, const FactorClass& b) {
              return std::tie(a.kind, a.length) < std::tie(b.kind, b.length);
            });
  return out;
}

void check_two_lengths(const std::vector<FactorClass>& classes) {
  std::set<int> lengths;
  for (const auto& f : classes) lengths.insert(f.length);
  if (lengths.size() > 2)
    throw DesignError("REJECT_PROFILE", "more than two cycle lengths in the union");
}

}  // namespace

BuildResult c_rgdd(const Certificate& outer, const std::vector<Certificate>& inner) {
  auto parts = parts_of(outer.host);
  int u = static_cast<int>(parts.size());
  size_t g = parts.empty() ? 0 : parts[0].size();
  for (const auto& p : parts)
    if (p.size() != g) throw DesignError("REJECT_HOST", "unequal part sizes");
  if (u == 1 && inner.size() == 1) return BuildResult::built(inner[0]);
  if (static_cast<int>(inner.size()) != u)
    throw DesignError("REJECT_PARAMS", "need one filling per part");

  require_valid(outer, "outer");
  for (const auto& c : inner) require_valid(c, "inner");

  SplitClasses os = split_classes(outer);
  std::vector<SplitClasses> is;
  for (const auto& c : inner) {
    if (c.host.vertex_count() != static_cast<long long>(g))
      throw DesignError("REJECT_PARAMS", "inner order must match the part size");
    is.push_back(split_classes(c));
  }
  for (const auto& s : is) {
    if (s.factors.size() != is[0].factors.size() || s.has_matching != is[0].has_matching)
      throw DesignError("REJECT_PROFILE", "inner splits disagree");
    for (size_t j = 0; j < s.factors.size(); ++j)
      if (s.factors[j].kind != is[0].factors[j].kind ||
          s.factors[j].length != is[0].factors[j].length)
        throw DesignError("REJECT_PROFILE", "inner splits disagree");
  }

  // parity bookkeeping: exactly the side forced by the part size may carry
  // a matching, and only when the final order is even
  long long v = static_cast<long long>(u) * g;
  bool inner_match = !is.empty() && is[0].has_matching;
  if (os.has_matching && inner_match)
    throw DesignError("REJECT_PROFILE", "matchings on both sides");
  if (v % 2 == 0) {
    if (g % 2 == 0 ? (!inner_match || os.has_matching) : (inner_match || !os.has_matching))
      throw DesignError("REJECT_PROFILE", "matching on the wrong side for this parity");
  } else if (os.has_matching || inner_match) {
    throw DesignError("REJECT_PROFILE", "matching present at odd order");
  }

  // relabel everything onto 0..v-1
  std::vector<Vertex> outer_sorted = outer.host.vertex_set();
  std::map<Vertex, Vertex> omap;
  for (size_t i = 0; i < outer_sorted.size(); ++i)
    omap[outer_sorted[i]] = Vertex::residue({static_cast<int>(i)});

  std::vector<FactorClass> classes;
  for (const auto& f : os.factors) classes.push_back(apply_map(f, omap));

  std::vector<std::map<Vertex, Vertex>> imaps(u);
  for (int p = 0; p < u; ++p) {
    std::vector<Vertex> part = parts[p];
    std::sort(part.begin(), part.end());
    std::vector<Vertex> local = inner[p].host.vertex_set();
    for (size_t i = 0; i < local.size(); ++i) imaps[p][local[i]] = omap.at(part[i]);
  }
  for (size_t j = 0; !is.empty() && j < is[0].factors.size(); ++j) {
    FactorClass f;
    f.kind = is[0].factors[j].kind;
    f.length = is[0].factors[j].length;
    for (int p = 0; p < u; ++p) {
      FactorClass piece = apply_map(is[p].factors[j], imaps[p]);
      for (auto& c : piece.cycles) f.cycles.push_back(std::move(c));
    }
    classes.push_back(f.canonical());
  }
  check_two_lengths(classes);

  std::vector<Edge> matching;
  if (os.has_matching)
    for (const auto& e : os.matching) matching.push_back(Edge(omap.at(e.a), omap.at(e.b)));
  if (inner_match)
    for (int p = 0; p < u; ++p)
      for (const auto& e : is[p].matching)
        matching.push_back(Edge(imaps[p].at(e.a), imaps[p].at(e.b)));
  std::sort(matching.begin(), matching.end());

  VertexSpace space;
  space.moduli = {static_cast<int>(v)};
  HostGraph host = matching.empty()
                       ? HostGraph::complete(space)
                       : HostGraph::complete_minus_one_factor(space, matching);

  Provenance prov;
  prov.name = "c_rgdd";
  prov.param("u", u);
  prov.param("g", static_cast<long long>(g));
  prov.ingredients.push_back("outer: " + outer.provenance.name);
  prov.ingredients.push_back("inner: " + inner[0].provenance.name + " x" +
                             std::to_string(u));
  return finish(std::move(host), std::move(classes), std::move(prov));
}

BuildResult l351(const Certificate& outer, const std::vector<Certificate>& fills) {
  auto parts = parts_of(outer.host);
  int u = static_cast<int>(parts.size());
  size_t g = parts.empty() ? 0 : parts[0].size();
  for (const auto& p : parts)
    if (p.size() != g) throw DesignError("REJECT_HOST", "unequal part sizes");
  if (fills.size() != outer.classes.size())
    throw DesignError("REJECT_PARAMS", "need one filling per outer class");

  require_valid(outer, "outer");
  int s = 0;
  for (size_t i = 0; i < fills.size(); ++i) {
    const auto& oc = outer.classes[i];
    if (oc.kind != FactorKind::TwoFactorUniform)
      throw DesignError("REJECT_PROFILE", "outer classes must be uniform 2-factors");
    const auto& fh = fills[i].host;
    if (fh.kind != HostKind::LexCycle || fh.m != oc.length)
      throw DesignError("REJECT_PROFILE",
                        "filling host must be the blown cycle of its outer class");
    if (s == 0) s = fh.n;
    if (fh.n != s) throw DesignError("REJECT_PROFILE", "fillings disagree on the blow-up");
    require_valid(fills[i], "filling");
    for (const auto& fc : fills[i].classes)
      if (fc.kind != FactorKind::TwoFactorUniform)
        throw DesignError("REJECT_PROFILE", "fillings must consist of uniform 2-factors");
  }
  if (s == 0) throw DesignError("REJECT_PARAMS", "nothing to fill");

  std::vector<Vertex> outer_sorted = outer.host.vertex_set();
  auto vid = [&](const Vertex& v) {
    return static_cast<int>(std::lower_bound(outer_sorted.begin(), outer_sorted.end(), v) -
                            outer_sorted.begin());
  };

  std::vector<FactorClass> classes;
  for (size_t i = 0; i < fills.size(); ++i) {
    const auto& oc = outer.classes[i];
    int L = oc.length;
    for (const auto& fc : fills[i].classes) {
      FactorClass f;
      f.kind = FactorKind::TwoFactorUniform;
      f.length = fc.length;
      for (const auto& ring : oc.cycles) {
        // copy the filling onto this cycle: position p, level j -> (ring[p], j)
        for (const auto& c : fc.cycles) {
          std::vector<Vertex> vs;
          for (const auto& w : c.vertices) {
            int p = imod(w.coords[0], L), j = w.coords[1];
            vs.push_back(Vertex::residue({vid(ring.vertices[p]), j}));
          }
          f.cycles.push_back(cyc(std::move(vs)));
        }
      }
      classes.push_back(f.canonical());
    }
  }
  check_two_lengths(classes);

  std::vector<std::vector<Vertex>> blown(u);
  for (int p = 0; p < u; ++p)
    for (const auto& x : parts[p])
      for (int j = 0; j < s; ++j) blown[p].push_back(Vertex::residue({vid(x), j}));

  Provenance prov;
  prov.name = "l351";
  prov.param("u", u);
  prov.param("g", static_cast<long long>(g));
  prov.param("s", s);
  prov.ingredients.push_back("outer: " + outer.provenance.name);
  for (const auto& f : fills)
    prov.ingredients.push_back("fill: " + f.provenance.name + " " + to_string(f.profile));
  return finish(HostGraph::multipartite(blown), std::move(classes), std::move(prov));
}

// ---------------------------------------------------------------------------
// pipelines

namespace {

struct StepLog {
  std::vector<std::string> notes;
  std::vector<std::string> missing;

  bool take(const std::string& what, const BuildResult& r) {
    if (r.ok()) {
      notes.push_back(what + " <- " + r.cert->provenance.name);
      return true;
    }
    if (r.status == BuildStatus::MissingIngredient && !r.missing.empty())
      for (const auto& m : r.missing) missing.push_back(m);
    else
      missing.push_back(what + " [" + to_string(r.status) +
                        (r.detail.empty() ? "" : ": " + r.detail) + "]");
    return false;
  }
};

long long param(const std::map<std::string, long long>& params, const std::string& key,
                long long fallback = LLONG_MIN) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (fallback != LLONG_MIN) return fallback;
  throw DesignError("REJECT_PARAMS", "pipeline needs parameter " + key);
}

BuildResult assemble(BuildResult r, const std::string& name,
                     const std::map<std::string, long long>& params, StepLog& log) {
  if (!log.missing.empty()) {
    BuildResult out;
    out.status = BuildStatus::MissingIngredient;
    out.detail = "unresolved sub-designs";
    out.missing = log.missing;
    return out;
  }
  if (!r.ok()) return r;
  Provenance prov;
  prov.name = "pipeline";
  prov.param("name", name);
  for (const auto& [k, v] : params) prov.param(k, v);
  prov.ingredients = log.notes;
  r.cert->provenance = std::move(prov);
  return r;
}

// 9u points, u in {5,7}: spanning split of K_u blown by 9, one mixed filling,
// then glued with spanning splits of K_9 on every part.
BuildResult pipeline_63(const std::map<std::string, long long>& params) {
  int u = static_cast<int>(param(params, "u"));
  int beta = static_cast<int>(param(params, "beta"));
  if ((u != 5 && u != 7) || (beta != 9 && beta != 11))
    throw DesignError("REJECT_PARAMS", "need u in {5,7} and beta in {9,11}");
  int af = 13 - beta;  // short-cycle count of the mixed filling

  StepLog log;
  auto base = hamilton_complete(u);
  log.take("spanning split of K_" + std::to_string(u), base);
  auto plain = cayley::hw_lex(u, 9, 9);
  log.take("all-short filling of C_" + std::to_string(u) + "[9]", plain);
  auto mixed = af == 2 ? cayley::lemma_cmn_two(u, 9) : cayley::lemma_cm9(u);
  log.take("(" + std::to_string(af) + "," + std::to_string(9 - af) + ") filling of C_" +
               std::to_string(u) + "[9]",
           mixed);
  auto inner = hamilton_complete(9);
  log.take("spanning split of K_9", inner);
  if (!log.missing.empty() || !base.ok())
    return assemble(BuildResult{}, "Lemma4.8", params, log);

  std::vector<Certificate> fills(base.cert->classes.size() - 1, *plain.cert);
  fills.push_back(*mixed.cert);
  auto mid = l351(*base.cert, fills);
  log.take("blown split on " + std::to_string(u) + " parts of 9", mid);
  if (!mid.ok()) return assemble(BuildResult{}, "Lemma4.8", params, log);

  auto out = c_rgdd(*mid.cert, std::vector<Certificate>(u, *inner.cert));
  log.take("final glue", out);
  return assemble(std::move(out), "Lemma4.8", params, log);
}

// 39t points, t odd > 1: triangle split of K_t[3] blown by 13 with one (8,5)
// filling, glued with triangle-resolvable splits of K_39 on every part.
BuildResult pipeline_39t(const std::map<std::string, long long>& params) {
  int t = static_cast<int>(param(params, "t"));
  if (t <= 1 || t % 2 == 0) throw DesignError("REJECT_PARAMS", "need odd t > 1");
  int a0 = 3 * (t - 1) / 2;

  StepLog log;
  auto base = resolvable_kug(3, t, 3);
  log.take("triangle split of K_" + std::to_string(t) + "[3]", base);
  auto plain = cayley::hw_lex(3, 13, 13);
  log.take("all-short filling of C_3[13]", plain);
  Certificate mixed = fixture("L4.2");
  log.notes.push_back("(8,5) filling of C_3[13] <- fixture L4.2");
  auto inner = resolvable_kug(3, 39, 1);
  log.take("HW(39;3,13;19,0)", inner);
  if (!log.missing.empty() || !base.ok())
    return assemble(BuildResult{}, "Lemma4.9", params, log);

  std::vector<Certificate> fills(a0 - 1, *plain.cert);
  fills.push_back(mixed);
  auto mid = l351(*base.cert, fills);
  log.take("blown split on " + std::to_string(t) + " parts of 39", mid);
  if (!mid.ok()) return assemble(BuildResult{}, "Lemma4.9", params, log);

  auto out = c_rgdd(*mid.cert, std::vector<Certificate>(t, *inner.cert));
  log.take("final glue", out);
  return assemble(std::move(out), "Lemma4.9", params, log);
}

// 9tu points, u in {5,7}, t odd > 1.
BuildResult pipeline_63t(const std::map<std::string, long long>& params) {
  int u = static_cast<int>(param(params, "u"));
  int t = static_cast<int>(param(params, "t"));
  int beta = static_cast<int>(param(params, "beta"));
  if ((u != 5 && u != 7) || t <= 1 || t % 2 == 0 || (beta != 5 && beta != 7))
    throw DesignError("REJECT_PARAMS", "need u in {5,7}, odd t > 1, beta in {5,7}");
  int af = 9 - beta;
  int a0 = u * (t - 1) / 2;

  StepLog log;
  auto base = resolvable_kug(u, t, u);
  log.take("C_" + std::to_string(u) + " split of K_" + std::to_string(t) + "[" +
               std::to_string(u) + "]",
           base);
  auto plain = cayley::hw_lex(u, 9, 9);
  log.take("all-short filling of C_" + std::to_string(u) + "[9]", plain);
  auto mixed = af == 2 ? cayley::lemma_cmn_two(u, 9) : cayley::lemma_cm9(u);
  log.take("(" + std::to_string(af) + "," + std::to_string(9 - af) + ") filling of C_" +
               std::to_string(u) + "[9]",
           mixed);
  auto inner = resolvable_kug(u, 9 * u, 1);
  log.take("HW(" + std::to_string(9 * u) + ";" + std::to_string(u) + ",9;" +
               std::to_string((9 * u - 1) / 2) + ",0)",
           inner);
  if (!log.missing.empty() || !base.ok())
    return assemble(BuildResult{}, "Lemma4.10", params, log);

  std::vector<Certificate> fills(a0 - 1, *plain.cert);
  fills.push_back(*mixed.cert);
  auto mid = l351(*base.cert, fills);
  log.take("blown split on " + std::to_string(t) + " parts of " + std::to_string(9 * u),
           mid);
  if (!mid.ok()) return assemble(BuildResult{}, "Lemma4.10", params, log);

  auto out = c_rgdd(*mid.cert, std::vector<Certificate>(t, *inner.cert));
  log.take("final glue", out);
  return assemble(std::move(out), "Lemma4.10", params, log);
}

// Allowed per-cycle long-factor counts for the weighted spanning cycles.
bool allowed_bi(int x, int n) {
  return x >= 0 && x <= n && x != 1 && x != 3 && x != n - 2 && x != n - 4;
}

// k(2kt+1) points: spanning split of K_k, all but one cycle blown and filled,
// the last cycle expanded through the almost resolvable system plus the
// residual row block.
BuildResult pipeline_arcs(const std::map<std::string, long long>& params) {
  int k = static_cast<int>(param(params, "k"));
  int t = static_cast<int>(param(params, "t"));
  int beta = static_cast<int>(param(params, "beta"));
  if (k < 3 || k % 2 == 0 || t < 1) throw DesignError("REJECT_PARAMS", "need odd k >= 3, t >= 1");
  int n = 2 * k * t + 1;
  int r = (k - 1) / 2;

  // the advertised beta ranges
  {
    bool ok = false;
    if (k == 3) {
      ok = t >= 3 && beta % 2 == 0 &&
           ((beta >= 4 && beta <= 6 * t - 6) || beta == 6 * t);
    } else {
      bool in_j = beta == 4 || beta == 6 ||
                  (beta >= 8 && beta <= k * (k - 1) * t + (k - 3) / 2);
      if (k == 5) ok = in_j && beta != 20 * t - 3 && beta != 20 * t - 1;
      else if (k == 7 || k == 9) ok = in_j;
      else ok = in_j && t != 2;
    }
    if (!ok) throw DesignError("REJECT_PARAMS", "beta outside the advertised range");
  }

  // split beta into the row-block share and the per-cycle shares
  std::vector<int> twol_choices{0};
  for (int x = 6; x <= 2 * k * t - 4; x += 2) twol_choices.push_back(x);
  int twol = -1;
  std::vector<int> bis;
  for (int cand : twol_choices) {
    int rem = beta - (2 * k * t - cand);
    if (rem < 0) continue;
    std::vector<int> pick;
    bool fail = false;
    for (int slot = 0; slot < r - 1; ++slot) {
      int x = std::min(rem, n);
      while (x > 0 && !allowed_bi(x, n)) --x;
      pick.push_back(x);
      rem -= x;
    }
    if (rem != 0) fail = true;
    if (!fail) {
      twol = cand;
      bis = pick;
      break;
    }
  }
  if (twol < 0)
    return BuildResult::fail(BuildStatus::NotFound, "no share split reaches this beta");

  StepLog log;
  auto dec = hamilton_complete(k);
  log.take("spanning split of K_" + std::to_string(k), dec);
  auto arcs_base = arcs::build_arcs(k, t);
  log.take(std::to_string(k) + "-ARCS(" + std::to_string(n) + ")", arcs_base);
  if (!log.missing.empty()) return assemble(BuildResult{}, "Theorem1.4", params, log);

  // relabel the decomposition so the last cycle reads 0,1,...,k-1
  std::map<Vertex, Vertex> relab;
  {
    const auto& ring = dec.cert->classes.back().cycles[0];
    for (int p = 0; p < k; ++p) relab[ring.vertices[p]] = Vertex::residue({p});
  }
  std::vector<std::vector<int>> B;
  for (const auto& f : dec.cert->classes) {
    FactorClass g = apply_map(f, relab);
    std::vector<int> seq;
    for (const auto& v : g.cycles[0].vertices) seq.push_back(v.coords[0]);
    B.push_back(seq);
  }

  std::vector<FactorClass> classes;
  const std::vector<int> mod{k, n};
  for (int i = 0; i < r - 1; ++i) {
    auto filled = cayley::hw_lex(k, n, n - bis[i]);
    if (!log.take("( " + std::to_string(n - bis[i]) + "," + std::to_string(bis[i]) +
                      ") filling of C_" + std::to_string(k) + "[" + std::to_string(n) + "]",
                  filled))
      continue;
    std::map<Vertex, Vertex> emb;  // lex position -> cycle vertex
    for (int p = 0; p < k; ++p)
      for (int y = 0; y < n; ++y)
        emb[Vertex::residue({p, y})] = Vertex::residue({B[i][p], y});
    for (const auto& f : filled.cert->classes) classes.push_back(apply_map(f, emb));
  }
  auto col = cayley::construction_00(*arcs_base.cert);
  log.take("column expansion", col);
  auto rows = cayley::construction_2l(k, t, twol / 2);
  log.take("row block 2l=" + std::to_string(twol), rows);
  if (!log.missing.empty()) return assemble(BuildResult{}, "Theorem1.4", params, log);
  for (const auto& f : col.cert->classes) classes.push_back(f);
  for (const auto& f : rows.cert->classes) classes.push_back(f);

  VertexSpace space;
  space.moduli = mod;
  Provenance prov;
  prov.name = "pipeline_assembly";
  auto out = finish(HostGraph::complete(space), std::move(classes), std::move(prov));
  log.take("final assembly", out);
  return assemble(std::move(out), "Theorem1.4", params, log);
}

std::optional<Certificate> external_base(int k, int t, int a) {
  std::ostringstream key;
  key << "external_hw_v" << 4 * k * t << "_m" << 4 * k << "_n" << 4 * k * t << "_a" << a;
  if (auto cert = search::cache_lookup(key.str()))
    if (check_certificate(*cert).valid) return cert;
  return std::nullopt;
}

// 4ktu points: blown split of K_u[4k] over an externally supplied base.
BuildResult pipeline_4kt(const std::map<std::string, long long>& params) {
  int k = static_cast<int>(param(params, "k"));
  int t = static_cast<int>(param(params, "t"));
  int u = static_cast<int>(param(params, "u", 1));
  long long alpha = param(params, "alpha");
  if (k < 1 || t < 2 || u < 1) throw DesignError("REJECT_PARAMS", "need k >= 1, t >= 2, u >= 1");
  long long v = 4LL * k * t * u;
  if (alpha < 0 || alpha > (v - 2) / 2)
    throw DesignError("REJECT_PARAMS", "alpha outside [0, (v-2)/2]");

  StepLog log;
  auto describe = [&](int a) {
    return "HW(" + std::to_string(4 * k * t) + ";" + std::to_string(4 * k) + "," +
           std::to_string(4 * k * t) + ";" + std::to_string(a) + "," +
           std::to_string(2 * k * t - 1 - a) + ") certificate file (external)";
  };
  if (u == 1) {
    auto base = external_base(k, t, static_cast<int>(alpha));
    if (!base) {
      log.missing.push_back(describe(static_cast<int>(alpha)));
      return assemble(BuildResult{}, "Theorem1.5", params, log);
    }
    log.notes.push_back(describe(static_cast<int>(alpha)) + " <- cache");
    return assemble(BuildResult::built(*base), "Theorem1.5", params, log);
  }

  int slots = 2 * k * (u - 1);
  long long c = std::min<long long>(slots, alpha / t);
  long long ap = alpha - c * t;
  while (ap > 2LL * k * t - 1 && c < slots) {
    ++c;
    ap = alpha - c * t;
  }
  if (ap < 0 || ap > 2LL * k * t - 1)
    throw DesignError("REJECT_PARAMS", "alpha cannot be split across the fillings");

  auto base = external_base(k, t, static_cast<int>(ap));
  if (base) log.notes.push_back(describe(static_cast<int>(ap)) + " <- cache");
  else log.missing.push_back(describe(static_cast<int>(ap)));
  auto outer = resolvable_kug(4 * k, u, 4 * k);
  log.take("C_" + std::to_string(4 * k) + " split of K_" + std::to_string(u) + "[" +
               std::to_string(4 * k) + "]",
           outer);
  auto shortf = lex_cycle_factor(4 * k, t);
  log.take("all-short filling of C_" + std::to_string(4 * k) + "[" + std::to_string(t) + "]",
           shortf);
  auto longf = cayley::lex_hamilton(4 * k, t);
  log.take("all-long filling of C_" + std::to_string(4 * k) + "[" + std::to_string(t) + "]",
           longf);
  if (!log.missing.empty()) return assemble(BuildResult{}, "Theorem1.5", params, log);

  std::vector<Certificate> fills;
  for (int i = 0; i < slots; ++i)
    fills.push_back(i < c ? *shortf.cert : *longf.cert);
  auto mid = l351(*outer.cert, fills);
  log.take("blown split on " + std::to_string(u) + " parts of " + std::to_string(4 * k * t),
           mid);
  if (!mid.ok()) return assemble(BuildResult{}, "Theorem1.5", params, log);

  auto out = c_rgdd(*mid.cert, std::vector<Certificate>(u, *base));
  log.take("final glue", out);
  return assemble(std::move(out), "Theorem1.5", params, log);
}

}  // namespace

BuildResult pipeline(const std::string& name,
                     const std::map<std::string, long long>& params) {
  if (name == "Lemma4.8") return pipeline_63(params);
  if (name == "Lemma4.9") return pipeline_39t(params);
  if (name == "Lemma4.10") return pipeline_63t(params);
  if (name == "Theorem1.4") return pipeline_arcs(params);
  if (name == "Theorem1.5") return pipeline_4kt(params);
  throw DesignError("REJECT_PARAMS", "unknown pipeline: " + name);
}

// ---------------------------------------------------------------------------
// status oracle

namespace {

HwpStatus solvable(std::string recipe) {
  HwpStatus s;
  s.kind = HwpStatus::Kind::Solvable;
  s.recipe = std::move(recipe);
  return s;
}
HwpStatus necessary_fail(std::string reason) {
  HwpStatus s;
  s.kind = HwpStatus::Kind::NecessaryFail;
  s.reason = std::move(reason);
  return s;
}
HwpStatus open_case(std::string tag) {
  HwpStatus s;
  s.kind = HwpStatus::Kind::Open;
  s.tag = std::move(tag);
  return s;
}

// exception bands of the odd-length theorem
bool odd_open(int m, int n, long long t, long long alpha, long long beta) {
  if (t > 1) return beta == 1 || beta == 3;
  if (beta >= 1 && beta <= (n - 3) / 2) return true;
  if (beta == (n + 1) / 2 || beta == (n + 5) / 2) return true;
  if (m == 3 && (alpha == 2 || alpha == 4)) return true;
  return false;
}

// advertised beta set of the weighted-cycle composition (v = k(2kt+1) only)
bool arcs_ok(int k, long long t, long long beta) {
  if (k == 3)
    return t >= 3 && beta % 2 == 0 && ((beta >= 4 && beta <= 6 * t - 6) || beta == 6 * t);
  bool in_j =
      beta == 4 || beta == 6 || (beta >= 8 && beta <= k * (k - 1) * t + (k - 3) / 2);
  if (k == 5) return in_j && beta != 20 * t - 3 && beta != 20 * t - 1;
  if (k == 7 || k == 9) return in_j;
  return in_j && t != 2;
}

// the published residual open buckets for v = k(2kt+1), m = k, n = 2kt+1
std::string residual_tag(int k, long long t, long long beta) {
  auto has = [&](std::initializer_list<long long> xs) {
    for (long long x : xs)
      if (beta == x) return true;
    return false;
  };
  if (t == 1) {
    if (k == 5 && has({1, 2, 3})) return "open: t=1, k=5, beta in {1,2,3}";
    if (k == 7 && has({1, 2, 3, 5})) return "open: t=1, k=7, beta in {1,2,3,5}";
    if (k >= 9 && has({1, 2, 3, 5, 7})) return "open: t=1, k>=9, beta in {1,2,3,5,7}";
  } else if (t == 2) {
    if ((k == 3 || k >= 11) &&
        ((beta >= 1 && beta <= 2 * k - 1) || has({2 * k + 1, 2 * k + 3})))
      return "open: t=2, small beta";
    if ((k == 5 || k == 7 || k == 9) && has({1, 2, 3, 5, 7}))
      return "open: t=2, beta in {1,2,3,5,7}";
  } else {
    if (k == 3) {
      long long top = t % 2 == 1 ? 3 * t - 2 : 3 * t + 3;
      if ((beta % 2 == 1 && beta <= top) || has({2, 9 * t - 3, 9 * t - 1}))
        return "open: k=3 residue";
    } else if (has({1, 2, 3, 5, 7})) {
      return "open: t>=3, beta in {1,2,3,5,7}";
    }
  }
  return "";
}

}  // namespace

HwpStatus hwp_status(long long v, int m, int n, long long alpha, long long beta) {
  if (alpha < 0 || beta < 0) return necessary_fail("negative class count");
  if (m < 3 && alpha > 0) return necessary_fail("cycle length below 3");
  if (n < 3 && beta > 0) return necessary_fail("cycle length below 3");
  if (alpha + beta != (v - 1) / 2)
    return necessary_fail("alpha + beta must equal floor((v-1)/2)");
  if (alpha > 0 && v % m != 0) return necessary_fail("m must divide v when alpha > 0");
  if (beta > 0 && v % n != 0) return necessary_fail("n must divide v when beta > 0");

  if (alpha == 0 || beta == 0) return solvable("single cycle length (cited)");
  if (m == n) return solvable("single cycle length (cited)");
  if (m > n) {
    std::swap(m, n);
    std::swap(alpha, beta);
  }

  // embedded designs and their direct compositions
  if (v == 33 && m == 3 && n == 11 && alpha == 6 && beta == 10)
    return solvable("fixture L4.5");
  if (v == 35 && m == 5 && n == 7 && alpha == 9 && beta == 8)
    return solvable("fixture L4.6");
  if (v == 39 && m == 3 && n == 13 && alpha == 8 && beta == 11)
    return solvable("fixture L4.7");
  if ((m == 5 || m == 7) && n == 9 && v == 9LL * m && (beta == 9 || beta == 11))
    return solvable("pipeline Lemma4.8");
  if ((m == 5 || m == 7) && n == 9 && v % (9 * m) == 0 && v / (9 * m) > 1 &&
      (v / (9 * m)) % 2 == 1 && (beta == 5 || beta == 7))
    return solvable("pipeline Lemma4.10");
  if (m == 3 && n == 13 && v % 39 == 0 && v / 39 > 1 && (v / 39) % 2 == 1 && beta == 5)
    return solvable("pipeline Lemma4.9");

  if (m % 2 == 1 && n % 2 == 1) {
    bool arcs_family = (n - 1) % (2 * m) == 0 && v == static_cast<long long>(m) * n;
    long long wt = arcs_family ? (n - 1) / (2 * m) : 0;
    if (v % (static_cast<long long>(m) * n) == 0) {
      long long t = v / (static_cast<long long>(m) * n);
      if (t % 2 == 1) {
        if (!odd_open(m, n, t, alpha, beta)) return solvable("odd cycle lengths (Theorem1.3)");
        if (arcs_family && arcs_ok(m, wt, beta))
          return solvable("weighted cycle composition (Theorem1.4)");
        if (arcs_family) {
          std::string tag = residual_tag(m, wt, beta);
          if (!tag.empty()) return open_case(tag);
        }
        return open_case(t > 1 ? "open: beta in {1,3}" : "open: t=1 small-beta band");
      }
    }
    if (arcs_family) {
      if (arcs_ok(m, wt, beta)) return solvable("weighted cycle composition (Theorem1.4)");
      std::string tag = residual_tag(m, wt, beta);
      if (!tag.empty()) return open_case(tag);
      return open_case("open: weighted cycle family residue");
    }
  }

  if (m % 4 == 0 && n % m == 0 && n / m >= 2 && v % n == 0)
    return solvable("blown split over an external base (Theorem1.5)");

  return open_case("outside the classified families");
}

BuildResult build_hw(long long v, int m, int n, long long alpha, long long beta) {
  HwpStatus st = hwp_status(v, m, n, alpha, beta);
  if (st.kind == HwpStatus::Kind::NecessaryFail)
    return BuildResult::fail(BuildStatus::NecessaryFail, st.reason);
  if (st.kind == HwpStatus::Kind::Open)
    return BuildResult::fail(BuildStatus::Open, st.tag);

  if (m > n) {
    std::swap(m, n);
    std::swap(alpha, beta);
  }
  const std::string& r = st.recipe;
  if (r.rfind("fixture ", 0) == 0) return BuildResult::built(fixture(r.substr(8)));
  if (r.find("Lemma4.8") != std::string::npos)
    return pipeline("Lemma4.8", {{"u", m}, {"beta", beta}});
  if (r.find("Lemma4.9") != std::string::npos)
    return pipeline("Lemma4.9", {{"t", v / 39}});
  if (r.find("Lemma4.10") != std::string::npos)
    return pipeline("Lemma4.10", {{"u", m}, {"t", v / (9 * m)}, {"beta", beta}});
  if (r.find("Theorem1.4") != std::string::npos)
    return pipeline("Theorem1.4",
                    {{"k", m}, {"t", (n - 1) / (2 * m)}, {"beta", beta}});
  if (r.find("Theorem1.5") != std::string::npos)
    return pipeline("Theorem1.5",
                    {{"k", m / 4}, {"t", n / m}, {"u", v / n}, {"alpha", alpha}});
  if (r.find("single cycle length") != std::string::npos) {
    int k = beta == 0 ? m : n;
    if (v % 2 == 1 && v % k == 0 && v <= 121) {
      auto got = resolvable_kug(k, static_cast<int>(v), 1);
      if (got.ok()) return got;
    }
    BuildResult out;
    out.status = BuildStatus::MissingIngredient;
    out.detail = "single-length factorization not constructed here";
    out.missing = {"HW(" + std::to_string(v) + ";" + std::to_string(m) + "," +
                   std::to_string(n) + ";" + std::to_string(alpha) + "," +
                   std::to_string(beta) + ") from the cited single-length result"};
    return out;
  }
  BuildResult out;
  out.status = BuildStatus::MissingIngredient;
  out.detail = "classified solvable, but the construction is external";
  out.missing = {"constructor for recipe: " + r};
  return out;
}

std::string to_string(const HwpStatus& s) {
  switch (s.kind) {
    case HwpStatus::Kind::Solvable: return "SOLVABLE(" + s.recipe + ")";
    case HwpStatus::Kind::NecessaryFail: return "NECESSARY_FAIL(" + s.reason + ")";
    case HwpStatus::Kind::Open: return "OPEN(" + s.tag + ")";
  }
  return "?";
}

}  // namespace hwdesign::compose
