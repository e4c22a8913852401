#include "hwdesign/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <utility>

#include "hwdesign/io.hpp"
#include "hwdesign/verify.hpp"

#ifndef HWDESIGN_DEFAULT_FIXTURE_DIR
#define HWDESIGN_DEFAULT_FIXTURE_DIR "data/fixtures"
#endif

namespace hwdesign::search {

// ---- fixture cache -------------------------------------------------------

std::string cache_dir() {
  if (const char* env = std::getenv("DESIGN_FIXTURE_DIR"); env && *env) return env;
  return HWDESIGN_DEFAULT_FIXTURE_DIR;
}

std::optional<Certificate> cache_lookup(const std::string& key) {
  const std::string path = cache_dir() + "/" + key + ".cert";
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    return io::load_file(path);
  } catch (const DesignError&) {
    return std::nullopt;  // unreadable cache entries are ignored
  }
}

void cache_store(const std::string& key, const Certificate& cert) {
  std::error_code ec;
  std::filesystem::create_directories(cache_dir(), ec);
  io::save_file(cache_dir() + "/" + key + ".cert", cert);
}

// ---- generic factorization search ---------------------------------------

namespace {

struct FactorSearch {
  int n = 0, F = 0;
  std::vector<int> plan;
  std::vector<std::vector<int>> cnt;  // remaining edge multiplicities
  std::vector<std::vector<int>> nbr;  // unique neighbours, search order
  std::vector<char> covered;
  long long nodes = 0, node_budget = 0;
  bool aborted = false;
  std::vector<IndexFactor> out;

  void take(int a, int b) { --cnt[a][b]; --cnt[b][a]; }
  void give(int a, int b) { ++cnt[a][b]; ++cnt[b][a]; }

  // uncov_adj[v]: remaining edge endpoints from v into vertices not yet
  // covered by the factor under construction.
  std::vector<int> uncov_adj;

  void cover(int w) {
    covered[w] = 1;
    for (int y : nbr[w]) uncov_adj[y] -= cnt[y][w];
  }
  void uncover(int w) {
    for (int y : nbr[w]) uncov_adj[y] += cnt[y][w];
    covered[w] = 0;
  }

  // A vertex still to be covered can only reach its two in-factor edges via
  // other uncovered vertices, the open path end, or the cycle start.
  bool feasible(int pend, int s) const {
    for (int x = 0; x < n; ++x) {
      if (covered[x]) continue;
      int opts = uncov_adj[x];
      if (pend >= 0 && cnt[x][pend] > 0) ++opts;
      if (s >= 0 && cnt[x][s] > 0) ++opts;
      if (opts < 2) return false;
    }
    return true;
  }

  // The final factor is forced: the leftover graph must itself be the factor.
  bool take_remainder() {
    const int len = plan[F - 1];
    std::vector<char> seen(n, 0);
    IndexFactor fac;
    for (int v0 = 0; v0 < n; ++v0) {
      if (seen[v0]) continue;
      IndexCycle cyc{v0};
      seen[v0] = 1;
      int prev = -1, cur = v0;
      while (true) {
        int nxt = -1;
        for (int w : nbr[cur]) {
          if (cnt[cur][w] == 0) continue;
          if (w == prev && cnt[cur][w] < 2) continue;
          if (seen[w] && w != v0) return false;
          nxt = w;
          break;
        }
        if (nxt < 0 || (nxt == v0 && static_cast<int>(cyc.size()) < 3)) return false;
        if (nxt == v0) break;
        seen[nxt] = 1;
        cyc.push_back(nxt);
        prev = cur;
        cur = nxt;
        if (static_cast<int>(cyc.size()) > len) return false;
      }
      if (static_cast<int>(cyc.size()) != len) return false;
      fac.push_back(std::move(cyc));
    }
    out.push_back(std::move(fac));
    return true;
  }

  bool solve_factor(int f) {
    if (f == F) return true;
    if (f == F - 1) return take_remainder();
    IndexFactor fac;
    std::fill(covered.begin(), covered.end(), 0);
    for (int v = 0; v < n; ++v) {
      int a = 0;
      for (int w : nbr[v]) a += cnt[v][w];
      uncov_adj[v] = a;
    }
    return grow(f, fac);
  }

  bool grow(int f, IndexFactor& fac) {
    int s = -1;
    for (int v = 0; v < n; ++v)
      if (!covered[v]) { s = v; break; }
    if (s < 0) {
      out.push_back(fac);
      // re-enter with fresh cover bookkeeping for the next factor
      std::vector<char> saved_cov = covered;
      std::vector<int> saved_adj = uncov_adj;
      if (solve_factor(f + 1)) return true;
      covered = std::move(saved_cov);
      uncov_adj = std::move(saved_adj);
      out.pop_back();
      return false;
    }
    cover(s);
    std::vector<int> path{s};
    bool ok = extend(f, fac, path, s);
    if (!ok) uncover(s);
    return ok;
  }

  bool extend(int f, IndexFactor& fac, std::vector<int>& path, int s) {
    if (aborted || ++nodes > node_budget) { aborted = true; return false; }
    const int len = plan[f];
    const int cur = path.back();
    if (static_cast<int>(path.size()) == len) {
      if (cnt[cur][s] > 0) {
        take(cur, s);
        fac.push_back(path);
        if (feasible(-1, -1) && grow(f, fac)) return true;
        fac.pop_back();
        give(cur, s);
      }
      return false;
    }
    for (int w : nbr[cur]) {
      if (aborted) return false;
      if (covered[w] || cnt[cur][w] == 0) continue;
      take(cur, w);
      cover(w);
      path.push_back(w);
      if (feasible(w, s) && extend(f, fac, path, s)) return true;
      path.pop_back();
      uncover(w);
      give(cur, w);
    }
    return false;
  }
};

// Edge-coloring formulation for uniform plans: give every edge one of F
// colors so each vertex gets two edges per color and each color class closes
// into cycles of length L only. Union-find chains per color detect early
// short cycles; the next edge to color is always one with fewest live colors.
struct ColorSearch {
  int n = 0, F = 0, L = 0;
  long long nodes = 0, node_budget = 0;
  bool aborted = false;
  int E = 0;
  std::vector<std::array<int, 2>> ends;        // edge -> endpoints
  std::vector<int> color;                      // edge -> color or -1
  std::vector<std::vector<int>> deg;           // deg[c][v]
  // per color union-find over vertices, undo via operation stack
  std::vector<std::vector<int>> parent;        // parent[c][v]
  std::vector<std::vector<int>> comp_edges;    // at roots
  struct Undo { int c, child, root; };
  std::vector<Undo> trail;

  int find(int c, int v) const {
    while (parent[c][v] != v) v = parent[c][v];
    return v;
  }

  bool feasible(int e, int c) const {
    int u = ends[e][0], v = ends[e][1];
    if (deg[c][u] >= 2 || deg[c][v] >= 2) return false;
    int ru = find(c, u), rv = find(c, v);
    if (ru == rv) return comp_edges[c][ru] + 1 == L;  // closes a cycle
    // merged open chains must stay short enough to close into an L-cycle
    return comp_edges[c][ru] + comp_edges[c][rv] + 1 < L;
  }

  void apply(int e, int c) {
    int u = ends[e][0], v = ends[e][1];
    color[e] = c;
    ++deg[c][u];
    ++deg[c][v];
    int ru = find(c, u), rv = find(c, v);
    if (ru != rv) {
      parent[c][ru] = rv;
      comp_edges[c][rv] += comp_edges[c][ru] + 1;
      trail.push_back({c, ru, rv});
    } else {
      comp_edges[c][ru] += 1;
      trail.push_back({c, -1, ru});
    }
  }

  void revert(int e) {
    Undo op = trail.back();
    trail.pop_back();
    if (op.child >= 0) {
      comp_edges[op.c][op.root] -= comp_edges[op.c][op.child] + 1;
      parent[op.c][op.child] = op.child;
    } else {
      comp_edges[op.c][op.root] -= 1;
    }
    int u = ends[e][0], v = ends[e][1];
    --deg[op.c][u];
    --deg[op.c][v];
    color[e] = -1;
  }

  bool solve(int colored, std::mt19937_64& rng) {
    if (aborted || ++nodes > node_budget) { aborted = true; return false; }
    if (colored == E) return true;
    int best = -1, best_count = F + 1;
    for (int e = 0; e < E; ++e) {
      if (color[e] >= 0) continue;
      int count = 0;
      for (int c = 0; c < F; ++c) count += feasible(e, c) ? 1 : 0;
      if (count == 0) return false;
      if (count < best_count) {
        best_count = count;
        best = e;
        if (count == 1) break;
      }
    }
    std::array<int, 16> order{};
    int live = 0;
    for (int c = 0; c < F; ++c)
      if (feasible(best, c)) order[live++] = c;
    for (int i = live - 1; i > 0; --i)
      std::swap(order[i], order[rng() % (i + 1)]);
    for (int i = 0; i < live; ++i) {
      int c = order[i];
      apply(best, c);
      if (solve(colored + 1, rng)) return true;
      if (aborted) { revert(best); return false; }
      revert(best);
    }
    return false;
  }
};

std::optional<std::vector<IndexFactor>> color_cycles(
    int n, const std::vector<std::array<int, 2>>& edges, int F, int L,
    const Budget& budget) {
  if (F > 16) return std::nullopt;
  std::mt19937_64 rng(budget.seed * 0x9e3779b97f4a7c15ULL + 1);
  for (int attempt = 0; attempt < budget.restarts; ++attempt) {
    ColorSearch cs;
    cs.n = n;
    cs.F = F;
    cs.L = L;
    cs.E = static_cast<int>(edges.size());
    cs.ends = edges;
    cs.color.assign(cs.E, -1);
    cs.deg.assign(F, std::vector<int>(n, 0));
    cs.parent.assign(F, std::vector<int>(n));
    cs.comp_edges.assign(F, std::vector<int>(n, 0));
    for (int c = 0; c < F; ++c)
      for (int v = 0; v < n; ++v) cs.parent[c][v] = v;
    cs.node_budget = budget.nodes;
    // Colors are interchangeable; pinning the first edge to color 0 is safe.
    int seeded = 0;
    if (cs.E > 0) {
      cs.apply(0, 0);
      seeded = 1;
    }
    if (cs.solve(seeded, rng)) {
      std::vector<IndexFactor> out(F);
      std::vector<std::vector<std::array<int, 2>>> adj(n);
      for (int e = 0; e < cs.E; ++e)
        for (int side = 0; side < 2; ++side)
          adj[edges[e][side]].push_back({e, edges[e][1 - side]});
      std::vector<char> used(cs.E, 0);
      for (int c = 0; c < F; ++c)
        for (int e0 = 0; e0 < cs.E; ++e0) {
          if (used[e0] || cs.color[e0] != c) continue;
          IndexCycle cyc{edges[e0][0]};
          used[e0] = 1;
          int cur = edges[e0][1], prev_edge = e0;
          while (cur != cyc.front()) {
            cyc.push_back(cur);
            for (auto [e, w] : adj[cur])
              if (!used[e] && e != prev_edge && cs.color[e] == c) {
                used[e] = 1;
                prev_edge = e;
                cur = w;
                break;
              }
          }
          out[c].push_back(std::move(cyc));
        }
      return out;
    }
  }
  return std::nullopt;
}

// Extracts one factor per color from a complete edge coloring.
std::vector<IndexFactor> collect_colored(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<int>& color, int F) {
  const int E = static_cast<int>(edges.size());
  std::vector<IndexFactor> out(F);
  std::vector<std::vector<std::array<int, 2>>> adj(n);
  for (int e = 0; e < E; ++e)
    for (int side = 0; side < 2; ++side)
      adj[edges[e][side]].push_back({e, edges[e][1 - side]});
  std::vector<char> used(E, 0);
  for (int c = 0; c < F; ++c)
    for (int e0 = 0; e0 < E; ++e0) {
      if (used[e0] || color[e0] != c) continue;
      IndexCycle cyc{edges[e0][0]};
      used[e0] = 1;
      int cur = edges[e0][1], prev_edge = e0;
      while (cur != cyc.front()) {
        cyc.push_back(cur);
        for (auto [e, w] : adj[cur])
          if (!used[e] && e != prev_edge && color[e] == c) {
            used[e] = 1;
            prev_edge = e;
            cur = w;
            break;
          }
      }
      out[c].push_back(std::move(cyc));
    }
  return out;
}

// Local-search fallback for uniform plans. Starts from an arbitrary split
// into F two-factors (Euler orientation, then peeling perfect matchings off
// the tail/head bipartite graph) and then swaps colors along random closed
// alternating trails, annealing on the total deviation of cycle lengths
// from L. Each move keeps every vertex at two edges per color, so only the
// cycle structure needs repairing.
struct Anneal {
  int n, F, L, E;
  const std::vector<std::array<int, 2>>* ends;
  std::vector<int> color;
  // inc[v][c] = the two edges of color c at v
  std::vector<std::vector<std::array<int, 2>>> inc;
  std::vector<int> obj;  // per-color sum of |cycle length - L|
  std::vector<char> in_trail, seen;
  std::mt19937_64 rng;

  bool init_partition() {
    const auto& es = *ends;
    std::vector<std::vector<std::array<int, 2>>> adj(n);
    for (int e = 0; e < E; ++e)
      for (int side = 0; side < 2; ++side)
        adj[es[e][side]].push_back({e, es[e][1 - side]});
    // Euler orientation per component (all degrees are even).
    std::vector<char> edone(E, 0);
    std::vector<int> cursor(n, 0), tail(E), head(E);
    for (int s = 0; s < n; ++s) {
      if (cursor[s] >= static_cast<int>(adj[s].size())) continue;
      std::vector<int> stack{s};
      std::vector<int> circuit;
      while (!stack.empty()) {
        int v = stack.back();
        bool advanced = false;
        while (cursor[v] < static_cast<int>(adj[v].size())) {
          auto [e, w] = adj[v][cursor[v]++];
          if (edone[e]) continue;
          edone[e] = 1;
          tail[e] = v;
          head[e] = w;
          stack.push_back(w);
          advanced = true;
          break;
        }
        if (!advanced) stack.pop_back();
      }
    }
    // Peel F perfect matchings off the F-regular tail/head bipartite graph.
    std::vector<std::vector<int>> outs(n);
    for (int e = 0; e < E; ++e) outs[tail[e]].push_back(e);
    color.assign(E, -1);
    for (int c = 0; c < F; ++c) {
      std::vector<int> match_head(n, -1);  // head vertex -> edge of color c
      std::vector<char> vis(n);
      std::function<bool(int)> augment = [&](int v) {
        for (int e : outs[v]) {
          if (color[e] != -1) continue;
          int h = head[e];
          if (vis[h]) continue;
          vis[h] = 1;
          if (match_head[h] == -1 || augment(tail[match_head[h]])) {
            match_head[h] = e;
            return true;
          }
        }
        return false;
      };
      for (int v = 0; v < n; ++v) {
        vis.assign(n, 0);
        if (!augment(v)) return false;
      }
      for (int h = 0; h < n; ++h) color[match_head[h]] = c;
    }
    inc.assign(n, std::vector<std::array<int, 2>>(F, {-1, -1}));
    for (int e = 0; e < E; ++e)
      for (int side = 0; side < 2; ++side) {
        auto& slot = inc[es[e][side]][color[e]];
        (slot[0] == -1 ? slot[0] : slot[1]) = e;
      }
    obj.assign(F, 0);
    for (int c = 0; c < F; ++c) obj[c] = measure(c);
    return true;
  }

  int measure(int c) {
    const auto& es = *ends;
    std::fill(seen.begin(), seen.end(), 0);
    int total = 0;
    for (int e0 = 0; e0 < E; ++e0) {
      if (color[e0] != c || seen[e0]) continue;
      seen[e0] = 1;
      int len = 1, start = es[e0][0], cur = es[e0][1], prev = e0;
      while (cur != start) {
        auto& slot = inc[cur][c];
        int e = slot[0] == prev ? slot[1] : slot[0];
        seen[e] = 1;
        cur = es[e][0] == cur ? es[e][1] : es[e][0];
        prev = e;
        ++len;
      }
      total += std::abs(len - L);
    }
    return total;
  }

  void flip(const std::vector<int>& trail, int c1, int c2) {
    const auto& es = *ends;
    for (int e : trail)
      for (int side = 0; side < 2; ++side) {
        auto& was = inc[es[e][side]][color[e]];
        if (was[0] == e) was[0] = std::exchange(was[1], -1);
        else was[1] = -1;
      }
    for (int e : trail) {
      color[e] = color[e] == c1 ? c2 : c1;
      for (int side = 0; side < 2; ++side) {
        auto& now = inc[es[e][side]][color[e]];
        (now[0] == -1 ? now[0] : now[1]) = e;
      }
    }
  }

  // One alternating-trail move; returns false if no trail closed.
  bool move(double temperature) {
    const auto& es = *ends;
    int c1 = static_cast<int>(rng() % F), c2 = static_cast<int>(rng() % (F - 1));
    if (c2 >= c1) ++c2;
    int v0 = static_cast<int>(rng() % n);
    int e0 = inc[v0][c1][rng() % 2];
    std::vector<int> trail{e0};
    in_trail[e0] = 1;
    int cur = es[e0][0] == v0 ? es[e0][1] : es[e0][0];
    int want = c2;
    bool closed = false;
    while (true) {
      if (cur == v0 && trail.size() % 2 == 0) {
        closed = true;
        break;
      }
      auto& slot = inc[cur][want];
      int pick = rng() % 2;
      int e = slot[pick];
      if (in_trail[e]) e = slot[1 - pick];
      if (in_trail[e]) break;
      in_trail[e] = 1;
      trail.push_back(e);
      cur = es[e][0] == cur ? es[e][1] : es[e][0];
      want = want == c1 ? c2 : c1;
    }
    for (int e : trail) in_trail[e] = 0;
    if (!closed) return false;
    int before = obj[c1] + obj[c2];
    flip(trail, c1, c2);
    int o1 = measure(c1), o2 = measure(c2);
    int delta = o1 + o2 - before;
    if (delta <= 0 ||
        std::generate_canonical<double, 32>(rng) < std::exp(-delta / temperature)) {
      obj[c1] = o1;
      obj[c2] = o2;
      return true;
    }
    flip(trail, c1, c2);
    return false;
  }

  bool run(long long moves) {
    double temperature = 1.8;
    const double cool = std::pow(0.02 / 1.8, 1.0 / std::max<long long>(moves, 1));
    for (long long i = 0; i < moves; ++i) {
      if (std::accumulate(obj.begin(), obj.end(), 0) == 0) return true;
      move(temperature);
      temperature *= cool;
    }
    return std::accumulate(obj.begin(), obj.end(), 0) == 0;
  }
};

// Small conflict-driven clause-learning SAT core (two watched literals,
// first-UIP learning, activity-driven branching with phase saving, geometric
// restarts). Just enough machinery for the factorization encodings below.
struct MiniSat {
  struct Clause {
    std::vector<int> lits;
    double act = 0;
    bool learned = false;
  };
  int nvars = 0;
  std::vector<Clause> db;
  std::vector<std::vector<int>> watches;  // per literal: clauses watching it
  std::vector<signed char> value;         // per literal: 1 true, -1 false
  std::vector<int> trail, trail_lim;
  std::vector<int> reason, level;  // per variable
  std::vector<double> act;
  std::vector<signed char> phase;
  std::vector<char> seen;
  double var_inc = 1.0, cla_inc = 1.0;
  size_t qhead = 0;
  long long conflicts = 0, conflict_budget = -1;
  std::mt19937_64 rng{1};

  int new_var() {
    int v = nvars++;
    watches.emplace_back();
    watches.emplace_back();
    value.push_back(0);
    value.push_back(0);
    reason.push_back(-1);
    level.push_back(0);
    act.push_back(0);
    phase.push_back(-1);
    seen.push_back(0);
    return v;
  }
  static int lit(int v, bool pos) { return 2 * v + (pos ? 0 : 1); }
  int cur_level() const { return static_cast<int>(trail_lim.size()); }

  void assign(int l, int why) {
    value[l] = 1;
    value[l ^ 1] = -1;
    int v = l >> 1;
    reason[v] = why;
    level[v] = cur_level();
    phase[v] = (l & 1) ? -1 : 1;
    trail.push_back(l);
  }

  int propagate() {  // returns conflicting clause index or -1
    while (qhead < trail.size()) {
      int fl = trail[qhead++] ^ 1;  // literal that just became false
      auto ws = std::move(watches[fl]);
      watches[fl].clear();
      for (size_t wi = 0; wi < ws.size(); ++wi) {
        int ci = ws[wi];
        auto& c = db[ci].lits;
        if (c[0] == fl) std::swap(c[0], c[1]);
        if (value[c[0]] == 1) {
          watches[fl].push_back(ci);
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k)
          if (value[c[k]] != -1) {
            std::swap(c[1], c[k]);
            watches[c[1]].push_back(ci);
            moved = true;
            break;
          }
        if (moved) continue;
        watches[fl].push_back(ci);
        if (value[c[0]] == -1) {
          for (size_t k = wi + 1; k < ws.size(); ++k) watches[fl].push_back(ws[k]);
          qhead = trail.size();
          return ci;
        }
        assign(c[0], ci);
      }
    }
    return -1;
  }

  void bump(int v) {
    if ((act[v] += var_inc) > 1e100) {
      for (auto& a : act) a *= 1e-100;
      var_inc *= 1e-100;
    }
  }

  void backtrack(int lvl) {
    if (cur_level() <= lvl) return;
    for (int i = static_cast<int>(trail.size()) - 1; i >= trail_lim[lvl]; --i) {
      int l = trail[i];
      value[l] = value[l ^ 1] = 0;
    }
    trail.resize(trail_lim[lvl]);
    trail_lim.resize(lvl);
    qhead = trail.size();
  }

  int analyze(int confl, std::vector<int>& learnt) {  // returns backjump level
    learnt.assign(1, 0);
    int counter = 0, p = -1;
    int idx = static_cast<int>(trail.size()) - 1;
    std::vector<int> to_clear;
    for (;;) {
      auto& c = db[confl].lits;
      for (size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
        int v = c[k] >> 1;
        if (seen[v] || level[v] == 0) continue;
        seen[v] = 1;
        to_clear.push_back(v);
        bump(v);
        if (level[v] == cur_level()) ++counter;
        else learnt.push_back(c[k]);
      }
      while (!seen[trail[idx] >> 1]) --idx;
      p = trail[idx];
      seen[p >> 1] = 0;
      if (--counter == 0) {
        learnt[0] = p ^ 1;
        break;
      }
      confl = reason[p >> 1];
      --idx;
    }
    int bj = 0;
    if (learnt.size() > 1) {
      size_t mi = 1;
      for (size_t k = 2; k < learnt.size(); ++k)
        if (level[learnt[k] >> 1] > level[learnt[mi] >> 1]) mi = k;
      std::swap(learnt[1], learnt[mi]);
      bj = level[learnt[1] >> 1];
    }
    for (int v : to_clear) seen[v] = 0;
    return bj;
  }

  // Adds a problem clause at decision level 0. Returns false on unsat.
  bool add_clause(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> out;
    for (int l : lits) {
      if (value[l] == 1 && level[l >> 1] == 0) return true;  // satisfied
      if (value[l] == -1 && level[l >> 1] == 0) continue;
      out.push_back(l);
    }
    for (size_t i = 0; i + 1 < out.size(); ++i)
      if ((out[i] ^ 1) == out[i + 1]) return true;  // tautology
    if (out.empty()) return false;
    if (out.size() == 1) {
      if (value[out[0]] == -1) return false;
      if (value[out[0]] == 0) {
        assign(out[0], -1);
        if (propagate() != -1) return false;
      }
      return true;
    }
    attach(std::move(out), false);
    return true;
  }

  int attach(std::vector<int> lits, bool learned) {
    db.push_back({std::move(lits), cla_inc, learned});
    int ci = static_cast<int>(db.size()) - 1;
    watches[db[ci].lits[0]].push_back(ci);
    watches[db[ci].lits[1]].push_back(ci);
    return ci;
  }

  void reduce_db() {
    std::vector<int> cand;
    for (int i = 0; i < static_cast<int>(db.size()); ++i)
      if (db[i].learned && db[i].lits.size() > 2) cand.push_back(i);
    if (cand.size() < 25000) return;
    std::sort(cand.begin(), cand.end(),
              [&](int a, int b) { return db[a].act < db[b].act; });
    std::vector<char> drop(db.size(), 0), locked(db.size(), 0);
    for (int l : trail)
      if (int r = reason[l >> 1]; r >= 0) locked[r] = 1;
    for (size_t i = 0; i < cand.size() / 2; ++i)
      if (!locked[cand[i]]) drop[cand[i]] = 1;
    std::vector<Clause> kept;
    std::vector<int> remap(db.size(), -1);
    for (int i = 0; i < static_cast<int>(db.size()); ++i)
      if (!drop[i]) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(std::move(db[i]));
      }
    db = std::move(kept);
    for (int l : trail)
      if (int& r = reason[l >> 1]; r >= 0) r = remap[r];
    for (auto& w : watches) w.clear();
    for (int i = 0; i < static_cast<int>(db.size()); ++i) {
      watches[db[i].lits[0]].push_back(i);
      watches[db[i].lits[1]].push_back(i);
    }
  }

  int solve() {  // 1 sat, 0 unsat, -1 out of budget
    long long next_restart = 100, since_restart = 0;
    for (;;) {
      int confl = propagate();
      if (confl != -1) {
        ++conflicts;
        ++since_restart;
        if (conflict_budget >= 0 && conflicts > conflict_budget) {
          backtrack(0);
          return -1;
        }
        if (cur_level() == 0) return 0;
        std::vector<int> learnt;
        int bj = analyze(confl, learnt);
        backtrack(bj);
        if (learnt.size() == 1) {
          if (value[learnt[0]] == -1) return 0;
          if (value[learnt[0]] == 0) assign(learnt[0], -1);
        } else {
          int ci = attach(learnt, true);
          assign(db[ci].lits[0], ci);
        }
        var_inc /= 0.95;
        cla_inc /= 0.999;
        if (cla_inc > 1e100) {
          for (auto& c : db) c.act *= 1e-100;
          cla_inc *= 1e-100;
        }
      } else {
        if (since_restart > next_restart) {
          since_restart = 0;
          next_restart = static_cast<long long>(next_restart * 1.1) + 1;
          backtrack(0);
          reduce_db();
          continue;
        }
        int best = -1;
        double best_act = -1;
        for (int v = 0; v < nvars; ++v)
          if (value[2 * v] == 0 && act[v] > best_act) {
            best_act = act[v];
            best = v;
          }
        if (best == -1) return 1;  // complete model
        trail_lim.push_back(static_cast<int>(trail.size()));
        bool pos = phase[best] == 1;
        if ((rng() & 1023) == 0) pos = !pos;
        assign(lit(best, pos), -1);
      }
    }
  }
};

// SAT formulation of the uniform coloring problem, refined lazily: encode
// "one color per edge" and "two edges per vertex per color" eagerly, block
// all short cycles that fit in a clause budget up front, then repeatedly
// solve, inspect the model's cycles, and block any wrong-length cycle (or,
// for overlong cycles, each of their L-edge monochromatic subpaths) until a
// model decomposes into L-cycles only. Learned clauses survive across
// refinements, which is what makes the loop converge.
std::optional<std::vector<IndexFactor>> sat_cycles(
    int n, const std::vector<std::array<int, 2>>& edges, int F, int L,
    const Budget& budget) {
  const int E = static_cast<int>(edges.size());
  if (E == 0 || F < 2) return std::nullopt;
  std::vector<std::vector<std::array<int, 2>>> adj(n);
  for (int e = 0; e < E; ++e)
    for (int side = 0; side < 2; ++side)
      adj[edges[e][side]].push_back({e, edges[e][1 - side]});

  MiniSat sat;
  sat.rng.seed(budget.seed * 0x9e3779b97f4a7c15ULL + 99);
  sat.conflict_budget = std::max<long long>(budget.nodes / 20, 50'000);
  auto X = [&](int e, int c) { return MiniSat::lit(e * F + c, true); };
  for (int i = 0; i < E * F; ++i) sat.new_var();

  bool ok = true;
  for (int e = 0; e < E && ok; ++e) {
    std::vector<int> alo;
    for (int c = 0; c < F; ++c) alo.push_back(X(e, c));
    ok = sat.add_clause(alo);
    for (int c1 = 0; c1 < F && ok; ++c1)
      for (int c2 = c1 + 1; c2 < F && ok; ++c2)
        ok = sat.add_clause({X(e, c1) ^ 1, X(e, c2) ^ 1});
  }
  for (int v = 0; v < n && ok; ++v) {
    std::vector<int> es;
    for (auto [e, w] : adj[v]) es.push_back(e);
    const int k = static_cast<int>(es.size());
    for (int c = 0; c < F && ok; ++c) {
      // at most two: every triple contains a false literal
      for (int i = 0; i < k && ok; ++i)
        for (int j = i + 1; j < k && ok; ++j)
          for (int l = j + 1; l < k && ok; ++l)
            ok = sat.add_clause({X(es[i], c) ^ 1, X(es[j], c) ^ 1, X(es[l], c) ^ 1});
      // at least two: every (k-1)-subset contains a true literal
      for (int skip = 0; skip < k && ok; ++skip) {
        std::vector<int> cl;
        for (int i = 0; i < k; ++i)
          if (i != skip) cl.push_back(X(es[i], c));
        ok = sat.add_clause(cl);
      }
    }
  }
  if (!ok) return std::nullopt;
  sat.add_clause({X(0, 0)});  // colors are interchangeable

  // Pre-block simple cycles shorter than L, up to the largest length whose
  // cycle count stays manageable.
  {
    auto enumerate = [&](int maxlen, long long cap, bool emit) -> long long {
      long long count = 0;
      std::vector<int> pe;
      std::vector<char> onpath(n, 0);
      std::function<bool(int, int)> dfs = [&](int v0, int cur) -> bool {
        for (auto [e, w] : adj[cur]) {
          if (w == v0 && pe.size() >= 2 && e != pe.back() &&
              static_cast<int>(pe.size()) + 1 <= maxlen) {
            if (e > pe[0]) {  // one orientation per cycle
              if (++count > cap) return false;
              if (emit) {
                pe.push_back(e);
                for (int c = 0; c < F; ++c) {
                  std::vector<int> cl;
                  for (int ee : pe) cl.push_back(X(ee, c) ^ 1);
                  ok = ok && sat.add_clause(cl);
                }
                pe.pop_back();
              }
            }
            continue;
          }
          if (w <= v0 || onpath[w]) continue;
          if (static_cast<int>(pe.size()) + 2 > maxlen - 1) continue;
          onpath[w] = 1;
          pe.push_back(e);
          bool cont = dfs(v0, w);
          pe.pop_back();
          onpath[w] = 0;
          if (!cont) return false;
        }
        return true;
      };
      for (int v = 0; v < n; ++v) {
        onpath[v] = 1;
        bool cont = dfs(v, v);
        onpath[v] = 0;
        if (!cont) return cap + 1;
      }
      return count;
    };
    const long long cap = 120'000;
    int maxpre = L - 1;
    while (maxpre >= 3 && enumerate(maxpre, cap, false) > cap) --maxpre;
    if (maxpre >= 3) enumerate(maxpre, cap, true);
    if (!ok) return std::nullopt;
  }

  for (;;) {
    int r = sat.solve();
    if (r != 1) return std::nullopt;  // unsat or out of conflicts
    std::vector<int> color(E, -1);
    for (int e = 0; e < E; ++e)
      for (int c = 0; c < F; ++c)
        if (sat.value[X(e, c)] == 1) color[e] = c;
    // trace the model's cycles; collect any of wrong length
    std::vector<char> used(E, 0);
    std::vector<std::vector<int>> bad;
    for (int e0 = 0; e0 < E; ++e0) {
      if (used[e0]) continue;
      int c = color[e0];
      std::vector<int> cyc{e0};
      used[e0] = 1;
      int start = edges[e0][0], cur = edges[e0][1], prev = e0;
      while (cur != start) {
        for (auto [e, w] : adj[cur])
          if (!used[e] && e != prev && color[e] == c) {
            used[e] = 1;
            cyc.push_back(e);
            prev = e;
            cur = w;
            break;
          }
      }
      if (static_cast<int>(cyc.size()) != L) bad.push_back(std::move(cyc));
    }
    if (bad.empty()) return collect_colored(n, edges, color, F);
    sat.backtrack(0);
    for (auto& cyc : bad) {
      const int len = static_cast<int>(cyc.size());
      if (len < L) {
        for (int c = 0; c < F; ++c) {
          std::vector<int> cl;
          for (int e : cyc) cl.push_back(X(e, c) ^ 1);
          if (!sat.add_clause(cl)) return std::nullopt;
        }
      } else {
        // an overlong cycle yields one forbidden L-edge open path per offset
        for (int s = 0; s < len; ++s)
          for (int c = 0; c < F; ++c) {
            std::vector<int> cl;
            for (int j = 0; j < L; ++j) cl.push_back(X(cyc[(s + j) % len], c) ^ 1);
            if (!sat.add_clause(cl)) return std::nullopt;
          }
      }
    }
  }
}

std::optional<std::vector<IndexFactor>> anneal_cycles(
    int n, const std::vector<std::array<int, 2>>& edges, int F, int L,
    const Budget& budget) {
  if (F < 2) return std::nullopt;
  for (int attempt = 0; attempt < budget.restarts; ++attempt) {
    Anneal an;
    an.n = n;
    an.F = F;
    an.L = L;
    an.E = static_cast<int>(edges.size());
    an.ends = &edges;
    an.in_trail.assign(an.E, 0);
    an.seen.assign(an.E, 0);
    an.rng.seed(budget.seed * 0x2545f4914f6cdd1dULL + attempt + 7);
    if (!an.init_partition()) return std::nullopt;
    if (an.run(std::max<long long>(budget.nodes / budget.restarts, 200'000)))
      return collect_colored(n, edges, an.color, F);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<IndexFactor>> factor_cycles(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<int>& plan, const Budget& budget) {
  const int F = static_cast<int>(plan.size());
  if (static_cast<long long>(edges.size()) != static_cast<long long>(F) * n)
    return std::nullopt;
  for (int len : plan)
    if (len < 3 || n % len != 0) return std::nullopt;

  std::vector<std::vector<int>> cnt0(n, std::vector<int>(n, 0));
  std::vector<int> deg(n, 0);
  for (const auto& e : edges) {
    ++cnt0[e[0]][e[1]];
    ++cnt0[e[1]][e[0]];
    ++deg[e[0]];
    ++deg[e[1]];
  }
  for (int v = 0; v < n; ++v)
    if (deg[v] != 2 * F) return std::nullopt;

  // Uniform plans respond much better to the coloring formulation.
  bool uniform = std::all_of(plan.begin(), plan.end(),
                             [&](int len) { return len == plan[0]; });
  if (uniform) {
    Budget quick = budget;
    quick.nodes = std::min<long long>(quick.nodes, 2'000'000);
    quick.restarts = std::min(quick.restarts, 2);
    if (auto colored = color_cycles(n, edges, F, plan[0], quick)) return colored;
    if (auto annealed = anneal_cycles(n, edges, F, plan[0], budget)) return annealed;
    if (auto clausal = sat_cycles(n, edges, F, plan[0], budget)) return clausal;
  }

  std::mt19937_64 rng(budget.seed);
  for (int attempt = 0; attempt < budget.restarts; ++attempt) {
    FactorSearch fs;
    fs.n = n;
    fs.F = F;
    fs.plan = plan;
    fs.cnt = cnt0;
    fs.covered.assign(n, 0);
    fs.uncov_adj.assign(n, 0);
    fs.node_budget = budget.nodes;
    fs.nbr.assign(n, {});
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w)
        if (cnt0[v][w] > 0) fs.nbr[v].push_back(w);
    if (attempt > 0)
      for (auto& lst : fs.nbr) std::shuffle(lst.begin(), lst.end(), rng);
    if (fs.solve_factor(0)) return fs.out;
  }
  return std::nullopt;
}

std::optional<std::vector<IndexFactor>> orbit_cycles(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<int>& perm, int L, const Budget& budget) {
  const int E = static_cast<int>(edges.size());
  if (E == 0 || static_cast<int>(perm.size()) != n) return std::nullopt;
  // order of the permutation and the induced map on edges
  auto edge_id = [&]() {
    std::map<std::pair<int, int>, std::vector<int>> at;
    for (int e = 0; e < E; ++e) {
      auto [a, b] = edges[e];
      at[{std::min(a, b), std::max(a, b)}].push_back(e);
    }
    return at;
  }();
  std::vector<int> eperm(E, -1);
  {
    std::map<std::pair<int, int>, size_t> taken;
    for (int e = 0; e < E; ++e) {
      int a = perm[edges[e][0]], b = perm[edges[e][1]];
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = edge_id.find(key);
      if (it == edge_id.end()) return std::nullopt;  // not an automorphism
      size_t& used = taken[key];
      if (used >= it->second.size()) return std::nullopt;
      eperm[e] = it->second[used++];
    }
  }
  // group edges into orbits; all must share the permutation's full order F
  std::vector<int> orbit_of(E, -1), orbit_pos(E, 0);
  std::vector<std::vector<int>> orbits;
  for (int e0 = 0; e0 < E; ++e0) {
    if (orbit_of[e0] >= 0) continue;
    std::vector<int> orb;
    for (int e = e0; orbit_of[e] < 0; e = eperm[e]) {
      orbit_of[e] = static_cast<int>(orbits.size());
      orbit_pos[e] = static_cast<int>(orb.size());
      orb.push_back(e);
    }
    orbits.push_back(std::move(orb));
  }
  const int F = static_cast<int>(orbits[0].size());
  if (F < 2 || E % F != 0) return std::nullopt;
  for (const auto& orb : orbits)
    if (static_cast<int>(orb.size()) != F) return std::nullopt;
  if (n % L != 0) return std::nullopt;

  // choose one edge per orbit so the chosen edges form a 2-factor of
  // L-cycles; union-find chains reject early, most-constrained orbit first
  const int S = static_cast<int>(orbits.size());
  if (S != n) return std::nullopt;  // a 2-factor holds exactly n edges
  std::vector<int> deg(n, 0), parent(n), comp(n, 0), pick(S, -1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v];
    return v;
  };
  auto feas = [&](int a, int b) {
    if (deg[a] >= 2 || deg[b] >= 2) return false;
    int ra = find(a), rb = find(b);
    if (ra == rb) return comp[ra] + 1 == L;
    return comp[ra] + comp[rb] + 1 < L;
  };
  long long nodes = 0;
  bool aborted = false;
  std::mt19937_64 rng(budget.seed * 0x2545f4914f6cdd1dULL + 3);
  std::function<bool(int)> dfs = [&](int left) -> bool {
    if (aborted || ++nodes > budget.nodes) {
      aborted = true;
      return false;
    }
    if (left == 0) return true;
    int best = -1, best_live = F + 1;
    for (int s = 0; s < S; ++s) {
      if (pick[s] >= 0) continue;
      int live = 0;
      for (int e : orbits[s]) live += feas(edges[e][0], edges[e][1]) ? 1 : 0;
      if (live == 0) return false;
      if (live < best_live) {
        best_live = live;
        best = s;
        if (live == 1) break;
      }
    }
    std::vector<int> cand;
    for (int e : orbits[best])
      if (feas(edges[e][0], edges[e][1])) cand.push_back(e);
    std::shuffle(cand.begin(), cand.end(), rng);
    for (int e : cand) {
      if (aborted) return false;
      int a = edges[e][0], b = edges[e][1];
      int ra = find(a), rb = find(b);
      int saved_comp_ra = comp[ra], saved_comp_rb = comp[rb];
      ++deg[a];
      ++deg[b];
      if (ra != rb) {
        parent[ra] = rb;
        comp[rb] += comp[ra] + 1;
      } else {
        comp[ra] += 1;
      }
      pick[best] = e;
      if (dfs(left - 1)) return true;
      pick[best] = -1;
      if (ra != rb) {
        parent[ra] = ra;
        comp[rb] = saved_comp_rb;
      }
      comp[ra] = saved_comp_ra;
      --deg[a];
      --deg[b];
    }
    return false;
  };
  if (!dfs(S)) return std::nullopt;

  // develop the base factor through the permutation's powers
  std::vector<int> base_color(E, -1);
  for (int s = 0; s < S; ++s) {
    int e = pick[s];
    for (int j = 0; j < F; ++j) {
      if (base_color[e] >= 0) return std::nullopt;
      base_color[e] = j;
      e = eperm[e];
    }
  }
  for (int e = 0; e < E; ++e)
    if (base_color[e] < 0) return std::nullopt;
  auto out = collect_colored(n, edges, base_color, F);
  for (const auto& fac : out)
    for (const auto& cyc : fac)
      if (static_cast<int>(cyc.size()) != L) return std::nullopt;
  return out;
}

std::optional<std::vector<FactorClass>> resolvable_cycles(
    const HostGraph& host, const std::vector<int>& plan, const Budget& budget) {
  auto verts = host.vertex_set();
  const int n = static_cast<int>(verts.size());
  auto index_of = [&](const Vertex& v) {
    return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) -
                            verts.begin());
  };
  std::vector<std::array<int, 2>> edges;
  for (const auto& e : host.edges()) edges.push_back({index_of(e.a), index_of(e.b)});
  auto sol = factor_cycles(n, edges, plan, budget);
  if (!sol) return std::nullopt;
  std::vector<FactorClass> out;
  for (size_t f = 0; f < sol->size(); ++f) {
    FactorClass fc;
    fc.kind = FactorKind::TwoFactorUniform;
    fc.length = plan[f];
    for (const auto& cyc : (*sol)[f]) {
      std::vector<Vertex> vs;
      for (int i : cyc) vs.push_back(verts[i]);
      fc.cycles.push_back(CycleSeq(std::move(vs)).canonical());
    }
    out.push_back(fc.canonical());
  }
  return out;
}

// ---- starter search ------------------------------------------------------

namespace {

// Vertex encoding for starter search: 0 = inf, then (x,j) -> 1 + 2x + j,
// skipping the removed vertex (0,1).
struct StarterSearch {
  int k, u, d, ncyc;
  std::vector<char> covered;
  std::vector<int> s00, s11, s01;  // slot capacities
  int sInf0 = 1, sInf1 = 1;
  long long nodes = 0, node_budget = 0;
  bool aborted = false;
  std::vector<std::vector<int>> cycles;  // as encoded vertex ids

  int nverts() const { return 1 + 2 * u; }  // id 2 ( = (0,1) ) stays unused
  static bool is_inf(int id) { return id == 0; }
  static int xof(int id) { return (id - 1) / 2; }
  static int jof(int id) { return (id - 1) % 2; }

  int norm(int diff) const {
    diff = imod(diff, u);
    return std::min(diff, u - diff);
  }

  // slot pointer for edge a-b, or nullptr if the edge is not usable
  int* slot(int a, int b) {
    if (is_inf(a) || is_inf(b)) {
      int other = is_inf(a) ? b : a;
      return jof(other) == 0 ? &sInf0 : &sInf1;
    }
    int ja = jof(a), jb = jof(b);
    if (ja == jb) {
      int dd = norm(xof(a) - xof(b));
      if (dd == 0) return nullptr;
      return ja == 0 ? &s00[dd] : &s11[dd];
    }
    int x0 = ja == 0 ? xof(a) : xof(b);
    int x1 = ja == 0 ? xof(b) : xof(a);
    return &s01[imod(x0 - x1, u)];
  }

  bool valid_vertex(int id) const { return id != 2; }  // (0,1) removed

  bool grow() {
    int s = -1;
    for (int v = 0; v < nverts(); ++v)
      if (valid_vertex(v) && !covered[v]) { s = v; break; }
    if (s < 0) return static_cast<int>(cycles.size()) == ncyc;
    if (static_cast<int>(cycles.size()) == ncyc) return false;
    covered[s] = 1;
    std::vector<int> path{s};
    bool ok = extend(s, path);
    if (!ok) covered[s] = 0;
    return ok;
  }

  bool extend(int s, std::vector<int>& path) {
    if (aborted || ++nodes > node_budget) { aborted = true; return false; }
    const int cur = path.back();
    if (static_cast<int>(path.size()) == k) {
      int* sl = slot(cur, s);
      if (sl && *sl > 0) {
        --*sl;
        cycles.push_back(path);
        if (grow()) return true;
        cycles.pop_back();
        ++*sl;
      }
      return false;
    }
    for (int w = 0; w < nverts(); ++w) {
      if (aborted) return false;
      if (!valid_vertex(w) || covered[w]) continue;
      int* sl = slot(cur, w);
      if (!sl || *sl == 0) continue;
      --*sl;
      covered[w] = 1;
      path.push_back(w);
      if (extend(s, path)) return true;
      path.pop_back();
      covered[w] = 0;
      ++*sl;
    }
    return false;
  }
};

}  // namespace

std::optional<arcs::Starter> search_starter(int k, char variant, const Budget& budget) {
  if (k < 3 || k % 2 == 0) return std::nullopt;
  const int u = variant == 'A' ? k : 3 * k;
  std::vector<int> dcands;
  if (variant == 'A') {
    for (int d = 1; d <= (u - 1) / 2; ++d)
      if (std::gcd(d, k) == 1) dcands.push_back(d);
  } else {
    dcands.push_back(3);
  }
  for (int d : dcands) {
    StarterSearch ss;
    ss.k = k;
    ss.u = u;
    ss.d = d;
    ss.ncyc = variant == 'A' ? 2 : 6;
    ss.covered.assign(ss.nverts(), 0);
    ss.s00.assign(u / 2 + 1, 1);
    ss.s11.assign(u / 2 + 1, 1);
    ss.s11[ss.norm(d)] = 0;
    ss.s01.assign(u, 1);
    ss.node_budget = budget.nodes;
    if (!ss.grow()) continue;
    arcs::Starter st;
    st.variant = variant;
    st.k = k;
    st.d = d;
    for (const auto& cyc : ss.cycles) {
      std::vector<Vertex> vs;
      for (int id : cyc) {
        if (StarterSearch::is_inf(id)) vs.push_back(Vertex::infinity());
        else vs.push_back(Vertex::residue({StarterSearch::xof(id), StarterSearch::jof(id)}));
      }
      st.cycles.push_back(CycleSeq(std::move(vs)).canonical());
    }
    return st;
  }
  return std::nullopt;
}

// ---- cycle frame search --------------------------------------------------

namespace {

// Searches u base holey factors (one missing each part) whose development by
// (-, +2 mod g) is a (k,1)-cycle frame of type g^u. Edge orbits under the
// development are keyed by (part pair, level difference, level parity).
struct FrameSearch {
  int k, g, u;
  // key index: ((a*u)+b)*g*2 + d*2 + parity
  std::vector<char> key_used;
  std::vector<char> covered;  // vertex id = p*g + y
  long long nodes = 0, node_budget = 0;
  bool aborted = false;
  std::vector<std::vector<std::vector<int>>> bases;  // per part: cycles of ids
  std::vector<int> vertex_order;                     // randomized id order

  int vid(int p, int y) const { return p * g + y; }
  int pof(int id) const { return id / g; }
  int yof(int id) const { return id % g; }

  int key(int a, int b) const {  // a, b vertex ids, different parts
    int pa = pof(a), pb = pof(b);
    if (pa > pb) std::swap(a, b), std::swap(pa, pb);
    int d = imod(yof(b) - yof(a), g);
    int parity = yof(a) % 2;
    return ((pa * u) + pb) * (g * 2) + d * 2 + parity;
  }

  bool solve_part(int p) {
    if (p == u) return true;
    std::fill(covered.begin(), covered.end(), 0);
    for (int y = 0; y < g; ++y) covered[vid(p, y)] = 1;  // hole
    bases.emplace_back();
    if (grow(p)) return true;
    bases.pop_back();
    return false;
  }

  bool grow(int p) {
    int s = -1;
    for (int id : vertex_order)
      if (!covered[id]) { s = id; break; }
    if (s < 0) {
      std::vector<char> saved = covered;
      if (solve_part(p + 1)) return true;
      covered = saved;
      return false;
    }
    covered[s] = 1;
    std::vector<int> path{s};
    bool ok = extend(p, s, path);
    if (!ok) covered[s] = 0;
    return ok;
  }

  bool extend(int p, int s, std::vector<int>& path) {
    if (aborted || ++nodes > node_budget) { aborted = true; return false; }
    const int cur = path.back();
    if (static_cast<int>(path.size()) == k) {
      if (pof(cur) != pof(s)) {
        int ky = key(cur, s);
        if (!key_used[ky]) {
          key_used[ky] = 1;
          bases.back().push_back(path);
          if (grow(p)) return true;
          bases.back().pop_back();
          key_used[ky] = 0;
        }
      }
      return false;
    }
    for (int w : vertex_order) {
      if (aborted) return false;
      if (covered[w] || pof(w) == pof(cur)) continue;
      int ky = key(cur, w);
      if (key_used[ky]) continue;
      key_used[ky] = 1;
      covered[w] = 1;
      path.push_back(w);
      if (extend(p, s, path)) return true;
      path.pop_back();
      covered[w] = 0;
      key_used[ky] = 0;
    }
    return false;
  }
};

}  // namespace

BuildResult frame(int k, int g, int u, const Budget& budget) {
  if (k < 3 || g < 2 || u < 2)
    throw DesignError("REJECT_PARAMS", "frame needs k>=3, g>=2, u>=2");
  // Necessary and sufficient conditions for a (k,1)-cycle frame of type g^u.
  if (g % 2 != 0)
    return BuildResult::fail(BuildStatus::NecessaryFail, "part size must be even");
  if ((static_cast<long long>(g) * (u - 1)) % k != 0)
    return BuildResult::fail(BuildStatus::NecessaryFail, "k must divide g(u-1)");
  if (k % 2 == 0 && u < 3)
    return BuildResult::fail(BuildStatus::NecessaryFail, "even k needs u >= 3");
  if (k % 2 == 1 && u < 4)
    return BuildResult::fail(BuildStatus::NecessaryFail, "odd k needs u >= 4");
  if (k == 6 && g == 6 && u == 3)
    return BuildResult::fail(BuildStatus::NecessaryFail, "exceptional type 6^3");

  const std::string key = "frame_k" + std::to_string(k) + "_g" + std::to_string(g) +
                          "_u" + std::to_string(u);
  if (auto cached = cache_lookup(key)) {
    auto rep = check_frame(*cached, k);
    if (rep.valid) return BuildResult::built(*cached);
  }

  std::mt19937_64 rng(budget.seed + k * 1000003ULL + g * 1009ULL + u);
  for (int attempt = 0; attempt < budget.restarts; ++attempt) {
    FrameSearch fsr;
    fsr.k = k;
    fsr.g = g;
    fsr.u = u;
    fsr.key_used.assign(u * u * g * 2, 0);
    fsr.covered.assign(u * g, 0);
    fsr.node_budget = budget.nodes;
    fsr.vertex_order.resize(u * g);
    std::iota(fsr.vertex_order.begin(), fsr.vertex_order.end(), 0);
    if (attempt > 0)
      std::shuffle(fsr.vertex_order.begin(), fsr.vertex_order.end(), rng);
    if (!fsr.solve_part(0)) continue;

    Certificate cert;
    std::vector<std::vector<Vertex>> parts(u);
    for (int p = 0; p < u; ++p)
      for (int y = 0; y < g; ++y) parts[p].push_back(Vertex::residue({p, y}));
    cert.host = HostGraph::multipartite(parts);
    const std::vector<int> moduli{u, g};
    for (int p = 0; p < u; ++p) {
      FactorClass base;
      base.kind = FactorKind::TwoFactorUniform;
      base.length = k;
      for (const auto& cyc : fsr.bases[p]) {
        std::vector<Vertex> vs;
        for (int id : cyc) vs.push_back(Vertex::residue({fsr.pof(id), fsr.yof(id)}));
        base.cycles.push_back(CycleSeq(std::move(vs)).canonical());
      }
      auto developed = develop(base, DevelopmentRule::translation({0, 2}, g / 2), moduli);
      for (auto& f : developed) cert.classes.push_back(std::move(f));
    }
    cert.profile = measure_profile(cert.classes);
    cert.provenance.name = "cycle_frame_search";
    cert.provenance.param("k", k);
    cert.provenance.param("g", g);
    cert.provenance.param("u", u);
    auto rep = check_frame(cert, k);
    if (!rep.valid) continue;  // stabilized orbit or similar; try again
    cache_store(key, cert);
    return BuildResult::built(cert);
  }
  return BuildResult::fail(BuildStatus::NotFound, "frame search exhausted its budget");
}

// ---- circulant Hamilton pair ---------------------------------------------

namespace {

struct HamPair {
  int n;
  std::vector<std::vector<int>> adj;   // neighbour lists
  std::vector<std::vector<int>> left;  // remaining multiplicity matrix
  std::vector<char> used;
  std::vector<int> path;
  long long nodes = 0, node_budget = 0;
  bool aborted = false;

  bool complement_is_hamilton(std::vector<int>& out) const {
    std::vector<std::vector<int>> nb(n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = 0; c < left[a][b]; ++c) {
          nb[a].push_back(b);
          nb[b].push_back(a);
        }
    for (int v = 0; v < n; ++v)
      if (nb[v].size() != 2) return false;
    out.clear();
    int prev = -1, cur = 0;
    do {
      out.push_back(cur);
      int nxt = (nb[cur][0] == prev && (nb[cur][1] != prev || nb[cur][0] == nb[cur][1]))
                    ? nb[cur][1]
                    : (nb[cur][0] != prev ? nb[cur][0] : nb[cur][1]);
      prev = cur;
      cur = nxt;
    } while (cur != 0 && static_cast<int>(out.size()) <= n);
    return static_cast<int>(out.size()) == n;
  }

  bool extend(std::vector<int>& h2) {
    if (aborted || ++nodes > node_budget) { aborted = true; return false; }
    const int cur = path.back();
    if (static_cast<int>(path.size()) == n) {
      if (left[cur][0] > 0) {
        --left[cur][0]; --left[0][cur];
        bool ok = complement_is_hamilton(h2);
        ++left[cur][0]; ++left[0][cur];
        return ok;
      }
      return false;
    }
    for (int w : adj[cur]) {
      if (aborted) return false;
      if (used[w] || left[cur][w] == 0) continue;
      --left[cur][w]; --left[w][cur];
      used[w] = 1;
      path.push_back(w);
      if (extend(h2)) return true;
      path.pop_back();
      used[w] = 0;
      ++left[cur][w]; ++left[w][cur];
    }
    return false;
  }
};

}  // namespace

std::optional<std::pair<std::vector<int>, std::vector<int>>> hamilton_pair_circulant(
    int n, int d1, int d2, const Budget& budget) {
  d1 = imod(d1, n);
  d2 = imod(d2, n);
  if (n < 5 || d1 == 0 || d2 == 0) return std::nullopt;
  if (d1 == d2 || d1 == imod(-d2, n)) return std::nullopt;  // simple graph only
  if (2 * d1 == n || 2 * d2 == n) return std::nullopt;
  if (std::gcd(std::gcd(d1, d2), n) != 1) return std::nullopt;
  HamPair hp;
  hp.n = n;
  hp.left.assign(n, std::vector<int>(n, 0));
  for (int y = 0; y < n; ++y)
    for (int d : {d1, d2}) {
      int z = imod(y + d, n);
      ++hp.left[y][z];
      ++hp.left[z][y];
    }
  hp.adj.assign(n, {});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (hp.left[a][b] > 0) hp.adj[a].push_back(b);
  hp.used.assign(n, 0);
  hp.node_budget = budget.nodes;
  hp.used[0] = 1;
  hp.path = {0};
  std::vector<int> h2;
  if (hp.extend(h2)) {
    std::vector<int> h1 = hp.path;
    return std::make_pair(h1, h2);
  }
  return std::nullopt;
}

// ---- row arrays ----------------------------------------------------------

namespace {

// Assigns the last two columns so every row sums to 0 mod n.
bool match_last_two(const std::vector<int>& targets, std::map<int, int> availA,
                    std::map<int, int> availB, int n, size_t r,
                    std::vector<int>& colA, std::vector<int>& colB) {
  if (r == targets.size()) return true;
  for (auto& [a, ca] : availA) {
    if (ca == 0) continue;
    int b = imod(targets[r] - a, n);
    auto itb = availB.find(b);
    if (itb == availB.end() || itb->second == 0) continue;
    --ca;
    --itb->second;
    colA[r] = a;
    colB[r] = b;
    if (match_last_two(targets, availA, availB, n, r + 1, colA, colB)) return true;
    ++ca;
    ++itb->second;
  }
  return false;
}

}  // namespace

std::optional<std::vector<std::vector<int>>> find_row_array(std::vector<int> S, int m,
                                                            int n, const Budget& budget) {
  const int R = static_cast<int>(S.size());
  if (R == 0 || m < 3 || n < 1) return std::nullopt;
  for (auto& s : S) s = imod(s, n);
  std::sort(S.begin(), S.end());
  long long sum = std::accumulate(S.begin(), S.end(), 0LL);
  if ((sum * m) % n != 0) return std::nullopt;

  std::mt19937_64 rng(budget.seed + m * 977ULL + n * 31ULL + R);
  const int attempts = std::max(budget.restarts * 32, 64);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    // free columns 0..m-3
    std::vector<std::vector<int>> cols(m, S);
    for (int c = 0; c + 2 < m; ++c)
      if (attempt > 0) std::shuffle(cols[c].begin(), cols[c].end(), rng);
    std::vector<int> targets(R, 0);
    for (int r = 0; r < R; ++r) {
      long long partial = 0;
      for (int c = 0; c + 2 < m; ++c) partial += cols[c][r];
      targets[r] = imod(-partial, n);
    }
    std::map<int, int> avail;
    for (int s : S) ++avail[s];
    std::vector<int> colA(R), colB(R);
    if (!match_last_two(targets, avail, avail, n, 0, colA, colB)) continue;
    std::vector<std::vector<int>> rows(R, std::vector<int>(m));
    for (int r = 0; r < R; ++r) {
      for (int c = 0; c + 2 < m; ++c) rows[r][c] = cols[c][r];
      rows[r][m - 2] = colA[r];
      rows[r][m - 1] = colB[r];
    }
    return rows;
  }
  return std::nullopt;
}

}  // namespace hwdesign::search
