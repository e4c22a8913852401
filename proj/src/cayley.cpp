#include "hwdesign/cayley.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "hwdesign/search.hpp"
#include "hwdesign/verify.hpp"

namespace hwdesign::cayley {

namespace {

const std::vector<bool> kBoth{true, true};

CycleSeq make_cycle(const std::vector<std::pair<int, int>>& pts, int m, int n) {
  std::vector<Vertex> vs;
  vs.reserve(pts.size());
  for (auto [x, y] : pts) vs.push_back(Vertex::residue({imod(x, m), imod(y, n)}));
  return CycleSeq(std::move(vs));
}

// m (resp. count) translates of one base cycle by `step`, as a single class.
FactorClass orbit_factor(const CycleSeq& base, const std::vector<int>& step,
                         int count, const std::vector<int>& moduli, int length) {
  FactorClass f;
  f.kind = FactorKind::TwoFactorUniform;
  f.length = length;
  for (int s = 0; s < count; ++s) {
    std::vector<int> off{step[0] * s, step[1] * s};
    f.cycles.push_back(translate_cycle(base, off, kBoth, moduli));
  }
  return f.canonical();
}

HostGraph cayley_host(int m, int n, const std::set<std::pair<int, int>>& conn) {
  std::vector<std::vector<int>> elements;
  for (auto [dx, dy] : conn) elements.push_back({imod(dx, m), imod(dy, n)});
  return HostGraph::cayley({m, n}, std::move(elements));
}

// {0} x (Z_n - {0})  union  {+-1} x {0}: per-level complete graphs plus the
// level cycles used by the column factors.
HostGraph columns_host(int k, int n) {
  std::set<std::pair<int, int>> conn;
  for (int d = 1; d < n; ++d) conn.insert({0, d});
  conn.insert({1, 0});
  conn.insert({k - 1, 0});
  return cayley_host(k, n, conn);
}

HostGraph rows_host(int k, int n) {
  std::set<std::pair<int, int>> conn;
  for (int d = 1; d < n; ++d) {
    conn.insert({1, d});
    conn.insert({k - 1, d});
  }
  return cayley_host(k, n, conn);
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

// One C_n-factor: the m first-coordinate translates of the base cycle whose
// levels follow ys and whose x track moves by eps[j] at step j. Needs the
// levels distinct and sum(eps) = 0 mod m.
FactorClass lift_factor(int m, int n, const std::vector<int>& ys,
                        const std::vector<int>& eps) {
  std::vector<std::pair<int, int>> pts;
  int x = 0;
  for (int j = 0; j < n; ++j) {
    pts.push_back({x, ys[j]});
    x += eps[j];
  }
  if (imod(x, m) != 0) throw DesignError("REJECT_PARAMS", "x track does not close");
  return orbit_factor(make_cycle(pts, m, n), {1, 0}, m, {m, n}, n);
}

// Two C_n-factors from one spanning level sequence ys (a cycle through all of
// Z_n). The x track rises (n+m)/2 times and falls (n-m)/2 times, so it closes
// after winding once around Z_m; the mirrored track pairs with it to consume
// both orientations of every level edge exactly once.
std::vector<FactorClass> lift_level_cycle(int m, int n, const std::vector<int>& ys) {
  if (static_cast<int>(ys.size()) != n) throw DesignError("REJECT_PARAMS", "level cycle length");
  if ((n - m) % 2 != 0 || n < m) throw DesignError("REJECT_PARAMS", "need n >= m, n = m mod 2");
  int rises = (n + m) / 2;
  std::vector<FactorClass> out;
  for (int sign : {+1, -1}) {
    std::vector<int> eps(n);
    for (int j = 0; j < n; ++j) eps[j] = (j < rises ? sign : -sign);
    out.push_back(lift_factor(m, n, ys, eps));
  }
  return out;
}

std::vector<FactorClass> two_cn(int m, int n, int d) {
  d = imod(d, n);
  if (std::gcd(d, n) != 1) throw DesignError("REJECT_PARAMS", "two_Cn needs gcd(d,n)=1");
  std::vector<int> ys(n);
  for (int j = 0; j < n; ++j) ys[j] = imod(static_cast<long long>(j) * d, n);
  return lift_level_cycle(m, n, ys);
}

std::optional<std::vector<FactorClass>> four_cn(int m, int n, int d1, int d2) {
  auto pair = search::hamilton_pair_circulant(n, d1, d2);
  if (!pair) return std::nullopt;
  std::vector<FactorClass> out;
  for (const auto& ys : {pair->first, pair->second})
    for (auto& f : lift_level_cycle(m, n, ys)) out.push_back(std::move(f));
  return out;
}

std::optional<std::vector<FactorClass>> five_cm(int m, int n, int i, int a) {
  i = imod(i, m);
  a = imod(a, n);
  if (std::gcd(i, m) != 1) throw DesignError("REJECT_PARAMS", "five_Cm needs gcd(i,m)=1");
  if (a == 0 || n / std::gcd(a, n) <= 3)
    throw DesignError("REJECT_PARAMS", "five_Cm needs ord(a) > 3");
  std::vector<int> S{0, a, n - a, imod(2 * a, n), imod(-2 * a, n)};
  auto rows = search::find_row_array(S, m, n);
  if (!rows) return std::nullopt;
  BaseRowTable table;
  table.m = m;
  table.n = n;
  table.axis_step = i;
  for (const auto& incs : *rows) {
    std::vector<int> b;
    int acc = 0;
    for (int j = 0; j + 1 < m; ++j) {
      acc = imod(acc + incs[j], n);
      b.push_back(acc);
    }
    table.rows.push_back(std::move(b));
  }
  return develop_rows(table);
}

// Five C_n-factors on {+-1} x {0, +-1, +-2}. Searched and cached: first for
// a base factor tiled by an order-5 translation (when the group has one),
// then directly (coloring, annealing, clause learning), and finally as the
// +-2 two-factor lift plus a searched 3-factor block on the rest. Every
// cycle of the inner block balances its rising and falling diagonal steps,
// which rules out closed-form translate-orbit bases.
std::optional<std::vector<FactorClass>> five_cn(int m, int n) {
  if (n < m || n < 7 || (n - m) % 2 != 0) return std::nullopt;
  std::set<std::pair<int, int>> conn;
  for (int d : {0, 1, 2, n - 1, n - 2}) {
    conn.insert({1, imod(d, n)});
    conn.insert({m - 1, imod(-d, n)});
  }
  HostGraph host = cayley_host(m, n, conn);
  std::ostringstream key;
  key << "five_cn_m" << m << "_n" << n;
  if (auto cached = search::cache_lookup(key.str())) {
    if (cached->host == host && check_certificate(*cached).valid) return cached->classes;
  }

  auto verts = host.vertex_set();
  const int N = static_cast<int>(verts.size());
  auto index_of = [&](const Vertex& v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) -
                            verts.begin());
  };
  auto as_classes = [&](const std::vector<search::IndexFactor>& sol) {
    std::vector<FactorClass> out;
    for (const auto& fac : sol) {
      FactorClass fc;
      fc.kind = FactorKind::TwoFactorUniform;
      fc.length = n;
      for (const auto& cyc : fac) {
        std::vector<Vertex> vs;
        for (int i : cyc) vs.push_back(verts[i]);
        fc.cycles.push_back(CycleSeq(std::move(vs)).canonical());
      }
      out.push_back(fc.canonical());
    }
    return out;
  };
  auto finish_cached = [&](std::vector<FactorClass> classes, const char* how)
      -> std::optional<std::vector<FactorClass>> {
    Certificate cert;
    cert.host = host;
    cert.classes = classes;
    cert.profile = measure_profile(cert.classes);
    cert.provenance.name = "five_cn_block";
    cert.provenance.param("m", m);
    cert.provenance.param("n", n);
    cert.provenance.ingredients.push_back(how);
    if (!check_certificate(cert).valid) return std::nullopt;
    search::cache_store(key.str(), cert);
    return classes;
  };

  std::vector<std::array<int, 2>> edges;
  for (const auto& e : host.edges())
    edges.push_back({index_of(e.a), index_of(e.b)});

  // translations of order five cyclically permute the factors of a tiled
  // solution, so a single base factor determines everything
  if ((m * n) % 5 == 0) {
    for (int gx = 0; gx < m; ++gx)
      for (int gy = 0; gy < n; ++gy) {
        int ord = std::lcm(m / std::gcd(gx, m), n / std::gcd(gy, n));
        if (ord != 5) continue;
        std::vector<int> perm(N);
        for (int x = 0; x < m; ++x)
          for (int y = 0; y < n; ++y)
            perm[index_of(Vertex::residue({x, y}))] =
                index_of(Vertex::residue({imod(x + gx, m), imod(y + gy, n)}));
        search::Budget bud;
        bud.nodes = 20'000'000;
        if (auto sol = search::orbit_cycles(N, edges, perm, n, bud))
          return finish_cached(as_classes(*sol), "tiled base factor");
      }
  }

  // direct search over the whole graph
  {
    search::Budget bud;
    bud.nodes = 60'000'000;
    bud.restarts = 6;
    if (auto five = search::resolvable_cycles(host, std::vector<int>(5, n), bud))
      return finish_cached(std::move(*five), "direct factor search");
  }

  // fall back to the +-2 lift plus a searched 3-factor block
  std::vector<FactorClass> classes = two_cn(m, n, 2);
  std::set<std::pair<int, int>> inner;
  for (int d : {0, 1, n - 1}) {
    inner.insert({1, imod(d, n)});
    inner.insert({m - 1, imod(-d, n)});
  }
  HostGraph block = cayley_host(m, n, inner);
  search::Budget bud;
  bud.nodes = 40'000'000;
  bud.restarts = 10;
  auto three = search::resolvable_cycles(block, std::vector<int>(3, n), bud);
  if (!three) return std::nullopt;
  for (auto& f : *three) classes.push_back(std::move(f));
  return finish_cached(std::move(classes), "lift plus 3-factor block");
}

// Partition the +-pair values `vals` of Z_n into two_Cn / four_Cn blocks.
std::optional<std::vector<FactorClass>> pair_blocks(int m, int n, std::vector<int> vals,
                                                    std::vector<std::string>* log) {
  std::sort(vals.rbegin(), vals.rend());
  std::vector<FactorClass> out;
  size_t at = 0;
  auto note = [&](const std::string& s) {
    if (log) log->push_back(s);
  };
  if (vals.size() % 2 == 1) {
    int d = vals[at++];
    if (std::gcd(d, n) != 1) return std::nullopt;
    for (auto& f : two_cn(m, n, d)) out.push_back(std::move(f));
    note("two_Cn d=" + std::to_string(d));
  }
  for (; at + 1 < vals.size(); at += 2) {
    int d1 = vals[at], d2 = vals[at + 1];
    if (auto four = four_cn(m, n, d1, d2)) {
      for (auto& f : *four) out.push_back(std::move(f));
      note("four_Cn d1=" + std::to_string(d1) + " d2=" + std::to_string(d2));
      continue;
    }
    if (std::gcd(d1, n) == 1 && std::gcd(d2, n) == 1) {
      for (int d : {d1, d2})
        for (auto& f : two_cn(m, n, d)) out.push_back(std::move(f));
      note("two_Cn d=" + std::to_string(d1) + ", two_Cn d=" + std::to_string(d2));
      continue;
    }
    return std::nullopt;
  }
  return out;
}

}  // namespace

std::vector<FactorClass> develop_rows(const BaseRowTable& table) {
  int m = table.m, n = table.n;
  if (m < 3 || n < 1) throw DesignError("REJECT_ROW", "degenerate table moduli");
  int step = imod(table.axis_step, m);
  if (std::gcd(step, m) != 1)
    throw DesignError("REJECT_ROW", "axis step does not generate Z_m");
  std::vector<FactorClass> out;
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.size()) != m - 1)
      throw DesignError("REJECT_ROW", "row needs m-1 entries");
    std::vector<std::pair<int, int>> pts{{0, 0}};
    for (int j = 1; j < m; ++j) pts.push_back({imod(j * step, m), imod(row[j - 1], n)});
    CycleSeq base = make_cycle(pts, m, n);
    std::set<Vertex> seen(base.vertices.begin(), base.vertices.end());
    if (static_cast<int>(seen.size()) != m)
      throw DesignError("REJECT_ROW", "row repeats a vertex");
    out.push_back(orbit_factor(base, {0, 1}, n, {m, n}, m));
  }
  return out;
}

DifferenceBudget::DifferenceBudget(const HostGraph& host) {
  if (host.kind == HostKind::LexCycle) {
    m = host.m;
    n = host.n;
    for (int dy = 0; dy < n; ++dy) {
      auto cls = std::min(std::make_pair(1, dy), std::make_pair(imod(-1, m), imod(-dy, n)));
      remaining[cls] += static_cast<long long>(m) * n;
    }
    return;
  }
  if (host.kind != HostKind::Cayley || host.space.moduli.size() != 2)
    throw DesignError("REJECT_HOST", "difference budget needs a rank-2 Cayley host");
  m = host.space.moduli[0];
  n = host.space.moduli[1];
  std::map<std::pair<int, int>, int> occ;
  for (const auto& g : host.connection) {
    std::pair<int, int> fwd{imod(g[0], m), imod(g[1], n)};
    std::pair<int, int> bwd{imod(-g[0], m), imod(-g[1], n)};
    occ[std::min(fwd, bwd)] += 1;
  }
  for (auto [cls, count] : occ)
    remaining[cls] += count * static_cast<long long>(m) * n / 2;
}

std::pair<int, int> DifferenceBudget::key(const Edge& e) const {
  if (!e.a.is_residue() || !e.b.is_residue() || e.a.coords.size() != 2)
    throw DesignError("REJECT_SHAPE", "difference key needs residue endpoints");
  std::pair<int, int> fwd{imod(e.b.coords[0] - e.a.coords[0], m),
                          imod(e.b.coords[1] - e.a.coords[1], n)};
  std::pair<int, int> bwd{imod(-fwd.first, m), imod(-fwd.second, n)};
  return std::min(fwd, bwd);
}

void DifferenceBudget::consume(const std::vector<FactorClass>& classes,
                               const std::string& who) {
  long long used = 0;
  for (const auto& f : classes)
    for (const auto& e : f.edges()) {
      auto k = key(e);
      auto it = remaining.find(k);
      if (it == remaining.end() || it->second == 0)
        throw DesignError("REJECT_COUNTS",
                          who + " overdraws class (" + std::to_string(k.first) + "," +
                              std::to_string(k.second) + ")");
      --it->second;
      ++used;
      if (it->second == 0) remaining.erase(it);
    }
  log.push_back(who + ": " + std::to_string(used) + " edges");
}

bool DifferenceBudget::empty() const { return remaining.empty(); }

std::optional<std::vector<FactorClass>> difference_factorization(int m, int n,
                                                                 const DiffRequest& req) {
  switch (req.kind) {
    case DiffKind::TwoCn:
      return two_cn(m, n, req.d1);
    case DiffKind::FourCn:
      return four_cn(m, n, req.d1, req.d2);
    case DiffKind::FiveCm:
      return five_cm(m, n, req.i, req.a);
    case DiffKind::FiveCn:
      return five_cn(m, n);
  }
  throw DesignError("REJECT_PARAMS", "unknown difference request");
}

BuildResult lemma_cmn_two(int m, int n) {
  if (m < 3 || m % 2 == 0 || n % 6 != 3 || n < 9)
    throw DesignError("REJECT_PARAMS", "need odd m >= 3 and n = 3 mod 6, n >= 9");
  if (m > n) throw DesignError("REJECT_PARAMS", "need m <= n");
  int d = n / 3;

  // Two C_m-factors: level coordinates alternate d, 2d along each base cycle.
  BaseRowTable table{m, n, 1, {}};
  std::vector<int> row1;
  for (int t = 1; t < m; ++t) row1.push_back(t % 2 == 1 ? d : 2 * d);
  std::vector<int> row2;
  for (int v : row1) row2.push_back(imod(-v, n));
  table.rows = {row1, row2};
  std::vector<FactorClass> classes = develop_rows(table);

  auto five = five_cn(m, n);
  if (!five) return BuildResult::fail(BuildStatus::NotFound, "five-factor block search failed");
  for (auto& f : *five) classes.push_back(std::move(f));

  // Remaining +-pair values, grouped per the residue of n mod 12.
  std::vector<std::string> blocks;
  for (int j = 2; j <= (d - 1) / 2; ++j) {
    if (auto four = four_cn(m, n, 2 * j - 1, 2 * j))
      for (auto& f : *four) classes.push_back(std::move(f));
    else
      return BuildResult::fail(BuildStatus::NotFound, "pair block search failed");
    blocks.push_back("four_Cn " + std::to_string(2 * j - 1) + "," + std::to_string(2 * j));
  }
  int upper = n % 12 == 3 ? (d - 1) / 4 : (d - 3) / 4;
  for (int j = 1; j <= upper; ++j) {
    if (auto four = four_cn(m, n, d + 2 * j - 1, d + 2 * j))
      for (auto& f : *four) classes.push_back(std::move(f));
    else
      return BuildResult::fail(BuildStatus::NotFound, "pair block search failed");
    blocks.push_back("four_Cn " + std::to_string(d + 2 * j - 1) + "," + std::to_string(d + 2 * j));
  }
  if (n % 12 == 9) {
    for (auto& f : two_cn(m, n, (n - 1) / 2)) classes.push_back(std::move(f));
    blocks.push_back("two_Cn " + std::to_string((n - 1) / 2));
  }

  HostGraph host = HostGraph::lex_cycle(m, n);
  DifferenceBudget budget(host);
  budget.consume(classes, "lemma_cmn_two");
  if (!budget.empty())
    return BuildResult::fail(BuildStatus::NotFound, "difference budget not exhausted");

  Provenance prov;
  prov.name = "lemma_cmn_two";
  prov.param("m", m);
  prov.param("n", n);
  for (const auto& b : blocks) prov.ingredients.push_back(b);
  return finish(std::move(host), std::move(classes), std::move(prov));
}

BuildResult lemma_cm9(int m) {
  if (m < 5 || m % 2 == 0) throw DesignError("REJECT_PARAMS", "need odd m >= 5");
  const int n = 9;
  // Level coordinates of the four base cycles; entries repeat with period two
  // beyond the fourth, rows 2 and 4 are the negatives of rows 1 and 3.
  auto fill = [&](std::initializer_list<int> head) {
    std::vector<int> row(head);
    while (static_cast<int>(row.size()) < m - 1) row.push_back(row[row.size() - 2]);
    row.resize(m - 1);
    return row;
  };
  std::vector<int> r1 = fill({3, 7, 3, 6});
  std::vector<int> r3 = fill({5, 2, 8, 4});
  auto neg = [&](const std::vector<int>& r) {
    std::vector<int> out;
    for (int v : r) out.push_back(imod(-v, n));
    return out;
  };
  BaseRowTable table{m, n, 1, {r1, neg(r1), r3, neg(r3)}};
  std::vector<FactorClass> classes = develop_rows(table);

  auto five = five_cn(m, n);
  if (!five) return BuildResult::fail(BuildStatus::NotFound, "five-factor block search failed");
  for (auto& f : *five) classes.push_back(std::move(f));

  HostGraph host = HostGraph::lex_cycle(m, n);
  DifferenceBudget budget(host);
  budget.consume(classes, "lemma_cm9");
  if (!budget.empty())
    return BuildResult::fail(BuildStatus::NotFound, "difference budget not exhausted");

  Provenance prov;
  prov.name = "lemma_cm9";
  prov.param("m", m);
  return finish(std::move(host), std::move(classes), std::move(prov));
}

BuildResult construction_00(const Certificate& arcs) {
  auto report = check_certificate(arcs);
  if (!report.valid)
    throw DesignError("REJECT_SHAPE", "input is not a valid certificate: " + report.summary());
  std::string why;
  if (!check_alignment(arcs, &why)) throw DesignError("REJECT_ALIGNMENT", why);

  std::vector<const FactorClass*> almost;
  const FactorClass* half = nullptr;
  for (const auto& f : arcs.classes) {
    if (f.kind == FactorKind::AlmostParallel) almost.push_back(&f);
    if (f.kind == FactorKind::HalfParallel) half = &f;
  }
  if (almost.empty() || half == nullptr)
    throw DesignError("REJECT_SHAPE", "input is not an almost resolvable system");
  int k = almost.front()->length;
  long long v = arcs.host.vertex_count();
  int kt = static_cast<int>(almost.size());
  if (v != 2LL * kt + 1 || kt % k != 0)
    throw DesignError("REJECT_COUNTS", "class count does not match the order");
  int t = kt / k;
  int vn = static_cast<int>(v);

  // Relabel: the vertex missed by almost class j becomes level j; everything
  // else (including infinity) fills the upper levels in canonical order.
  std::map<Vertex, int> level;
  for (int j = 0; j < kt; ++j) level[*almost[j]->missing] = j;
  int next = kt;
  for (const auto& w : arcs.host.vertex_set())
    if (!level.count(w)) level[w] = next++;
  if (next != vn) throw DesignError("REJECT_SHAPE", "missing vertices repeat");

  auto place = [&](const CycleSeq& c, int copy) {
    std::vector<Vertex> vs;
    for (const auto& w : c.vertices) vs.push_back(Vertex::residue({copy, level.at(w)}));
    return CycleSeq(std::move(vs));
  };
  auto column = [&](int j) {
    std::vector<std::pair<int, int>> pts;
    for (int x = 0; x < k; ++x) pts.push_back({x, j});
    return make_cycle(pts, k, vn);
  };

  std::vector<FactorClass> classes;
  for (int j = 0; j < kt; ++j) {
    FactorClass f;
    f.kind = FactorKind::TwoFactorUniform;
    f.length = k;
    for (int i = 0; i < k; ++i)
      for (const auto& c : almost[j]->cycles) f.cycles.push_back(place(c, i));
    f.cycles.push_back(column(j));
    classes.push_back(f.canonical());
  }
  FactorClass last;
  last.kind = FactorKind::TwoFactorUniform;
  last.length = k;
  for (int i = 0; i < k; ++i)
    for (const auto& c : half->cycles) last.cycles.push_back(place(c, i));
  for (int j = kt; j < vn; ++j) last.cycles.push_back(column(j));
  classes.push_back(last.canonical());

  Provenance prov;
  prov.name = "construction_00";
  prov.param("k", k);
  prov.param("t", t);
  prov.ingredients.push_back("almost resolvable system: " + arcs.provenance.name);
  return finish(columns_host(k, vn), std::move(classes), std::move(prov));
}

BuildResult construction_2ku(const Certificate& frame) {
  if (frame.host.kind != HostKind::Multipartite)
    throw DesignError("REJECT_HOST", "expected a multipartite frame");
  int u = static_cast<int>(frame.host.parts.size());
  if (u < 3 || frame.classes.empty())
    throw DesignError("REJECT_HOST", "degenerate frame");
  for (const auto& p : frame.host.parts)
    if (p.size() != 2) throw DesignError("REJECT_PARTS", "parts must have size 2");
  int k = frame.classes.front().length;
  if (imod(2 * (u - 1), k) != 0)
    throw DesignError("REJECT_PARAMS", "need 2(u-1) = 0 mod k");
  auto report = check_frame(frame, k);
  if (!report.valid)
    throw DesignError("REJECT_SHAPE", "input is not a valid frame: " + report.summary());

  // Part p's two vertices become levels 2p and 2p+1.
  std::map<Vertex, int> level;
  for (int p = 0; p < u; ++p) {
    auto pair = frame.host.parts[p];
    std::sort(pair.begin(), pair.end());
    level[pair[0]] = 2 * p;
    level[pair[1]] = 2 * p + 1;
  }
  // Holey factor for part p = the class avoiding both of p's vertices.
  std::vector<const FactorClass*> holey(u, nullptr);
  for (const auto& f : frame.classes) {
    std::set<Vertex> covered;
    for (const auto& w : f.covered_vertices()) covered.insert(w);
    for (int p = 0; p < u; ++p)
      if (!covered.count(frame.host.parts[p].front())) holey[p] = &f;
  }
  int n = 2 * u;
  auto column = [&](int j) {
    std::vector<std::pair<int, int>> pts;
    for (int x = 0; x < k; ++x) pts.push_back({x, j});
    return make_cycle(pts, k, n);
  };

  std::vector<FactorClass> classes;
  for (int p = 0; p < u; ++p) {
    FactorClass f;
    f.kind = FactorKind::TwoFactorUniform;
    f.length = k;
    for (int i = 0; i < k; ++i)
      for (const auto& c : holey[p]->cycles) {
        std::vector<Vertex> vs;
        for (const auto& w : c.vertices) vs.push_back(Vertex::residue({i, level.at(w)}));
        f.cycles.push_back(CycleSeq(std::move(vs)));
      }
    f.cycles.push_back(column(2 * p));
    f.cycles.push_back(column(2 * p + 1));
    classes.push_back(f.canonical());
  }
  FactorClass matching;
  matching.kind = FactorKind::OneFactor;
  for (int i = 0; i < k; ++i)
    for (int p = 0; p < u; ++p)
      matching.pairs.push_back(Edge(Vertex::residue({i, 2 * p}), Vertex::residue({i, 2 * p + 1})));
  classes.push_back(matching.canonical());

  Provenance prov;
  prov.name = "construction_2ku";
  prov.param("k", k);
  prov.param("u", u);
  prov.ingredients.push_back("cycle frame: " + frame.provenance.name);
  return finish(columns_host(k, n), std::move(classes), std::move(prov));
}

BuildResult construction_2ku(int k, int u) {
  if (k < 3 || imod(2 * (u - 1), k) != 0)
    throw DesignError("REJECT_PARAMS", "need 2(u-1) = 0 mod k");
  BuildResult frame = search::frame(k, 2, u);
  if (!frame.ok()) {
    BuildResult out = BuildResult::fail(BuildStatus::MissingIngredient, frame.detail);
    out.missing.push_back("(" + std::to_string(k) + ",1)-cycle frame of type 2^" +
                          std::to_string(u));
    return out;
  }
  return construction_2ku(*frame.cert);
}

BuildResult construction_2l(int k, int t, int l) {
  if (k < 3 || k % 2 == 0 || t < 1) throw DesignError("REJECT_PARAMS", "need odd k >= 3, t >= 1");
  int kt = k * t;
  if (l < 0 || l > kt || l == 1 || l == 2 || l == kt - 1 || l == kt)
    throw DesignError("REJECT_PARAMS", "l outside the allowed set");
  int n = 2 * kt + 1;

  std::vector<FactorClass> classes;
  Provenance prov;
  prov.name = "construction_2l";
  prov.param("k", k);
  prov.param("t", t);
  prov.param("l", l);

  if (k == 17 && t == 1 && l == 14) {
    // Stored 28x17 increment array; the lower half negates the upper, and
    // columns 4..17 alternate the first entry with its negative.
    static const int head[14][3] = {
        {3, -15, 12}, {6, 12, -18}, {-12, 6, 6},  {15, -18, 3}, {-18, 3, 15},
        {2, 7, -9},   {7, -9, 2},   {-9, 2, 7},   {1, 10, -11}, {10, -11, 1},
        {-11, 1, 10}, {5, 14, 16},  {14, 16, 5},  {16, 5, 14}};
    BaseRowTable table{17, 35, 1, {}};
    for (int i = 0; i < 28; ++i) {
      int sign = i < 14 ? 1 : -1;
      const int* h = head[i % 14];
      std::vector<int> inc;
      for (int j = 0; j < 3; ++j) inc.push_back(sign * h[j]);
      for (int j = 3; j < 16; ++j) inc.push_back((j % 2 == 1 ? 1 : -1) * sign * h[0]);
      std::vector<int> b;
      int acc = 0;
      for (int v : inc) b.push_back(acc = imod(acc + v, 35));
      table.rows.push_back(std::move(b));
    }
    classes = develop_rows(table);
    prov.ingredients.push_back("stored 28x17 base-row array");
    auto rest = pair_blocks(17, 35, {4, 8, 13}, &prov.ingredients);
    if (!rest) return BuildResult::fail(BuildStatus::NotFound, "pair block search failed");
    for (auto& f : *rest) classes.push_back(std::move(f));
  } else {
    if (l > 0) {
      std::vector<int> S;
      for (int d = 1; d <= l; ++d) {
        S.push_back(d);
        S.push_back(n - d);
      }
      auto rows = search::find_row_array(S, k, n);
      if (!rows)
        return BuildResult::fail(BuildStatus::NotFound, "no base-row array found within budget");
      BaseRowTable table{k, n, 1, {}};
      for (const auto& inc : *rows) {
        std::vector<int> b;
        int acc = 0;
        for (int j = 0; j + 1 < k; ++j) b.push_back(acc = imod(acc + inc[j], n));
        table.rows.push_back(std::move(b));
      }
      classes = develop_rows(table);
      prov.ingredients.push_back("searched base-row array on +-{1..l}");
    }
    std::vector<int> vals;
    for (int d = l + 1; d <= kt; ++d) vals.push_back(d);
    auto rest = pair_blocks(k, n, vals, &prov.ingredients);
    if (!rest) return BuildResult::fail(BuildStatus::NotFound, "pair block search failed");
    for (auto& f : *rest) classes.push_back(std::move(f));
  }

  HostGraph host = rows_host(k, n);
  DifferenceBudget budget(host);
  budget.consume(classes, "construction_2l");
  if (!budget.empty())
    return BuildResult::fail(BuildStatus::NotFound, "difference budget not exhausted");
  return finish(std::move(host), std::move(classes), std::move(prov));
}

BuildResult hw_lex(int m, int n, int alpha) {
  if (m < 3 || n < 3 || n % 2 == 0)
    throw DesignError("REJECT_PARAMS", "need m >= 3 and odd n >= 3");
  if (alpha < 0 || alpha > n) throw DesignError("REJECT_PARAMS", "alpha outside [0, n]");
  int beta = n - alpha;
  if (beta == 1 || beta == 3)
    return BuildResult::fail(BuildStatus::NotFound,
                             "no allocation with " + std::to_string(beta) + " level factors");
  if (beta > 0 && m > n)
    return BuildResult::fail(BuildStatus::NotFound, "level blocks need m <= n");

  Provenance prov;
  prov.name = "hw_lex";
  prov.param("m", m);
  prov.param("n", n);
  prov.param("alpha", alpha);
  prov.param("beta", beta);

  std::vector<FactorClass> classes;
  std::vector<bool> taken(n, false);  // level differences consumed by blocks
  if (beta % 2 == 1) {                // beta >= 5: five-factor block on {0,+-1,+-2}
    if (n < 7) return BuildResult::fail(BuildStatus::NotFound, "order too small for a five block");
    auto five = five_cn(m, n);
    if (!five) return BuildResult::fail(BuildStatus::NotFound, "five-factor block search failed");
    for (auto& f : *five) classes.push_back(std::move(f));
    prov.ingredients.push_back("five_Cn block on {0,+-1,+-2}");
    taken[0] = taken[1] = taken[2] = taken[n - 1] = taken[n - 2] = true;
  }
  int pairs_needed = (beta - (beta % 2 == 1 ? 5 : 0)) / 2;
  std::vector<int> vals;
  for (int d = (n - 1) / 2; d >= 1 && static_cast<int>(vals.size()) < pairs_needed; --d)
    if (!taken[d]) vals.push_back(d);
  if (static_cast<int>(vals.size()) != pairs_needed)
    return BuildResult::fail(BuildStatus::NotFound, "not enough level differences");
  for (int d : vals) taken[d] = taken[n - d] = true;
  auto blocks = pair_blocks(m, n, vals, &prov.ingredients);
  if (!blocks) return BuildResult::fail(BuildStatus::NotFound, "pair block search failed");
  for (auto& f : *blocks) classes.push_back(std::move(f));

  if (alpha > 0) {
    std::vector<int> S;
    for (int d = 0; d < n; ++d)
      if (!taken[d]) S.push_back(d);
    auto rows = search::find_row_array(S, m, n);
    if (!rows)
      return BuildResult::fail(BuildStatus::NotFound, "no base-row array found within budget");
    BaseRowTable table{m, n, 1, {}};
    for (const auto& inc : *rows) {
      std::vector<int> b;
      int acc = 0;
      for (int j = 0; j + 1 < m; ++j) b.push_back(acc = imod(acc + inc[j], n));
      table.rows.push_back(std::move(b));
    }
    for (auto& f : develop_rows(table)) classes.push_back(std::move(f));
    prov.ingredients.push_back("base-row array on the remaining differences");
  }

  HostGraph host = HostGraph::lex_cycle(m, n);
  DifferenceBudget budget(host);
  budget.consume(classes, "hw_lex");
  if (!budget.empty())
    return BuildResult::fail(BuildStatus::NotFound, "difference budget not exhausted");
  return finish(std::move(host), std::move(classes), std::move(prov));
}

namespace {

// Spanning cycle of C_m[n] winding n times forward, using each level increment
// exactly once per position; its n level translates partition the edges.
std::optional<std::vector<int>> winding_hamilton(int m, int n, long long* nodes) {
  int total = m * n;
  std::vector<std::vector<bool>> used(m, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> visited(m, std::vector<bool>(n, false));
  std::vector<int> incs;
  incs.reserve(total);
  visited[0][0] = true;
  int x = 0, y = 0;
  std::function<bool(int)> go = [&](int depth) -> bool {
    if (--*nodes < 0) return false;
    if (depth == total) return true;
    int nx = (x + 1) % m;
    bool closing = depth == total - 1;
    for (int c = 0; c < n; ++c) {
      if (used[x][c]) continue;
      int ny = imod(y + c, n);
      if (closing ? !(nx == 0 && ny == 0) : visited[nx][ny]) continue;
      used[x][c] = true;
      if (!closing) visited[nx][ny] = true;
      int px = x, py = y;
      x = nx;
      y = ny;
      incs.push_back(c);
      if (go(depth + 1)) return true;
      incs.pop_back();
      x = px;
      y = py;
      used[px][c] = false;
      if (!closing) visited[nx][ny] = false;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return incs;
}

}  // namespace

BuildResult lex_hamilton(int m, int n) {
  if (m < 3 || n < 1) throw DesignError("REJECT_PARAMS", "need m >= 3, n >= 1");
  Provenance prov;
  prov.name = "lex_hamilton";
  prov.param("m", m);
  prov.param("n", n);
  // The winding cycle closes only when the increments can sum to 0 mod n;
  // their total is m * n(n-1)/2, which fails for even n with odd m.
  std::vector<FactorClass> classes;
  long long nodes = 20'000'000;
  std::optional<std::vector<int>> incs;
  if (imod(static_cast<long long>(m) * n * (n - 1) / 2, n) == 0)
    incs = winding_hamilton(m, n, &nodes);
  if (incs) {
    std::vector<std::pair<int, int>> pts;
    int x = 0, y = 0;
    for (int j = 0; j < m * n; ++j) {
      pts.push_back({x, y});
      y = imod(y + (*incs)[j], n);
      x = (x + 1) % m;
    }
    CycleSeq base = make_cycle(pts, m, n);
    for (int s = 0; s < n; ++s) {
      FactorClass f;
      f.kind = FactorKind::TwoFactorUniform;
      f.length = m * n;
      f.cycles.push_back(translate_cycle(base, {0, s}, kBoth, {m, n}));
      classes.push_back(f.canonical());
    }
    prov.ingredients.push_back("winding spanning cycle, level translates");
  } else {
    HostGraph host = HostGraph::lex_cycle(m, n);
    std::ostringstream key;
    key << "lex_hamilton_m" << m << "_n" << n;
    if (auto cached = search::cache_lookup(key.str())) {
      if (cached->host == host && check_certificate(*cached).valid)
        return BuildResult::built(*cached);
    }
    auto found = search::resolvable_cycles(host, std::vector<int>(n, m * n));
    if (!found)
      return BuildResult::fail(BuildStatus::NotFound, "no spanning-cycle factorization found");
    classes = *found;
    prov.ingredients.push_back("searched spanning-cycle factorization");
    Certificate cert;
    cert.host = host;
    cert.classes = classes;
    cert.profile = measure_profile(classes);
    cert.provenance = prov;
    search::cache_store(key.str(), cert);
  }
  return finish(HostGraph::lex_cycle(m, n), std::move(classes), std::move(prov));
}

}  // namespace hwdesign::cayley
