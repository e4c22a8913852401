#include "hwdesign/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace hwdesign {

Vertex Vertex::residue_mod(std::vector<int> coords, const std::vector<int>& moduli) {
  if (coords.size() != moduli.size())
    throw DesignError("REJECT_PARAMS", "residue arity does not match moduli");
  for (size_t i = 0; i < coords.size(); ++i) coords[i] = imod(coords[i], moduli[i]);
  return residue(std::move(coords));
}

std::string to_string(const Vertex& v) {
  switch (v.tag) {
    case Vertex::Tag::Infinity: return "inf";
    case Vertex::Tag::Label: return "\"" + v.label + "\"";
    case Vertex::Tag::Residue: {
      std::ostringstream os;
      os << '(';
      for (size_t i = 0; i < v.coords.size(); ++i) {
        if (i) os << ',';
        os << v.coords[i];
      }
      os << ')';
      return os.str();
    }
  }
  return "?";
}

Edge::Edge(Vertex x, Vertex y) {
  if (x == y) throw DesignError("REJECT_SHAPE", "loop edge " + to_string(x));
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

std::string to_string(const Edge& e) {
  return "{" + to_string(e.a) + "," + to_string(e.b) + "}";
}

std::vector<Vertex> VertexSpace::vertices() const {
  std::vector<Vertex> out;
  if (has_infinity) out.push_back(Vertex::infinity());
  std::vector<std::string> ls = labels;
  std::sort(ls.begin(), ls.end());
  for (auto& l : ls) out.push_back(Vertex::named(l));
  if (!moduli.empty()) {
    std::vector<int> cur(moduli.size(), 0);
    while (true) {
      out.push_back(Vertex::residue(cur));
      int i = static_cast<int>(cur.size()) - 1;
      while (i >= 0) {
        if (++cur[i] < moduli[i]) break;
        cur[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }
  return out;
}

long long VertexSpace::size() const {
  long long s = 1;
  for (int m : moduli) s *= m;
  if (moduli.empty()) s = 0;
  return s + (has_infinity ? 1 : 0) + static_cast<long long>(labels.size());
}

CycleSeq CycleSeq::canonical() const {
  const auto& vs = vertices;
  const int n = static_cast<int>(vs.size());
  if (n < 3) throw DesignError("REJECT_SHAPE", "cycle shorter than 3");
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (vs[i] < vs[best]) best = i;
  std::vector<Vertex> rot(n);
  for (int i = 0; i < n; ++i) rot[i] = vs[(best + i) % n];
  if (rot[n - 1] < rot[1]) {
    std::reverse(rot.begin() + 1, rot.end());
  }
  return CycleSeq(std::move(rot));
}

std::vector<Edge> CycleSeq::edges() const {
  std::vector<Edge> out;
  const int n = length();
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.emplace_back(vertices[i], vertices[(i + 1) % n]);
  return out;
}

std::string to_string(FactorKind k) {
  switch (k) {
    case FactorKind::TwoFactorUniform: return "two_factor_uniform";
    case FactorKind::TwoFactorMixed: return "two_factor_mixed";
    case FactorKind::AlmostParallel: return "almost_parallel";
    case FactorKind::HalfParallel: return "half_parallel";
    case FactorKind::OneFactor: return "one_factor";
  }
  return "?";
}

std::vector<Edge> FactorClass::edges() const {
  std::vector<Edge> out;
  if (kind == FactorKind::OneFactor) {
    out = pairs;
  } else {
    for (const auto& c : cycles) {
      auto es = c.edges();
      out.insert(out.end(), es.begin(), es.end());
    }
  }
  return out;
}

std::vector<Vertex> FactorClass::covered_vertices() const {
  std::vector<Vertex> out;
  if (kind == FactorKind::OneFactor) {
    for (const auto& e : pairs) {
      out.push_back(e.a);
      out.push_back(e.b);
    }
  } else {
    for (const auto& c : cycles)
      out.insert(out.end(), c.vertices.begin(), c.vertices.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FactorClass FactorClass::canonical() const {
  FactorClass f = *this;
  for (auto& c : f.cycles) c = c.canonical();
  std::sort(f.cycles.begin(), f.cycles.end());
  std::sort(f.pairs.begin(), f.pairs.end());
  return f;
}

std::string to_string(HostKind k) {
  switch (k) {
    case HostKind::Complete: return "complete";
    case HostKind::CompleteMinusOneFactor: return "complete_minus_one_factor";
    case HostKind::Multipartite: return "multipartite";
    case HostKind::LexCycle: return "lex_cycle";
    case HostKind::Cayley: return "cayley";
  }
  return "?";
}

HostGraph HostGraph::complete(VertexSpace space) {
  HostGraph h;
  h.kind = HostKind::Complete;
  h.space = std::move(space);
  return h;
}

HostGraph HostGraph::complete_minus_one_factor(VertexSpace space, std::vector<Edge> f) {
  HostGraph h;
  h.kind = HostKind::CompleteMinusOneFactor;
  h.space = std::move(space);
  std::sort(f.begin(), f.end());
  h.one_factor = std::move(f);
  return h;
}

HostGraph HostGraph::multipartite(std::vector<std::vector<Vertex>> parts) {
  HostGraph h;
  h.kind = HostKind::Multipartite;
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());
  h.parts = std::move(parts);
  return h;
}

HostGraph HostGraph::lex_cycle(int m, int n) {
  if (m < 3 || n < 1) throw DesignError("REJECT_HOST", "lex_cycle needs m>=3, n>=1");
  HostGraph h;
  h.kind = HostKind::LexCycle;
  h.m = m;
  h.n = n;
  h.space.moduli = {m, n};
  return h;
}

HostGraph HostGraph::cayley(std::vector<int> moduli, std::vector<std::vector<int>> connection) {
  HostGraph h;
  h.kind = HostKind::Cayley;
  h.space.moduli = moduli;
  for (auto& s : connection) {
    if (s.size() != moduli.size())
      throw DesignError("REJECT_HOST", "connection element arity mismatch");
    for (size_t i = 0; i < s.size(); ++i) s[i] = imod(s[i], moduli[i]);
  }
  std::sort(connection.begin(), connection.end());
  h.connection = std::move(connection);
  return h;
}

std::vector<Vertex> HostGraph::vertex_set() const {
  if (kind == HostKind::Multipartite) {
    std::vector<Vertex> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  return space.vertices();  // already sorted by construction
}

long long HostGraph::vertex_count() const {
  if (kind == HostKind::Multipartite) {
    long long s = 0;
    for (const auto& p : parts) s += static_cast<long long>(p.size());
    return s;
  }
  return space.size();
}

std::vector<Edge> HostGraph::edges() const {
  std::vector<Edge> out;
  switch (kind) {
    case HostKind::Complete: {
      auto vs = vertex_set();
      for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) out.emplace_back(vs[i], vs[j]);
      break;
    }
    case HostKind::CompleteMinusOneFactor: {
      auto vs = vertex_set();
      if (vs.size() % 2 != 0)
        throw DesignError("REJECT_HOST", "minus-one-factor host has odd order");
      std::vector<Vertex> covered;
      for (const auto& e : one_factor) {
        covered.push_back(e.a);
        covered.push_back(e.b);
      }
      std::sort(covered.begin(), covered.end());
      if (covered != vs)
        throw DesignError("REJECT_HOST", "removed set is not a one-factor");
      for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) out.emplace_back(vs[i], vs[j]);
      std::sort(out.begin(), out.end());
      std::vector<Edge> kept;
      kept.reserve(out.size() - one_factor.size());
      auto it = one_factor.begin();
      for (const auto& e : out) {
        if (it != one_factor.end() && *it == e) {
          ++it;
          continue;
        }
        kept.push_back(e);
      }
      if (it != one_factor.end())
        throw DesignError("REJECT_HOST", "one-factor edge not in host");
      return kept;
    }
    case HostKind::Multipartite: {
      for (size_t i = 0; i < parts.size(); ++i)
        for (size_t j = i + 1; j < parts.size(); ++j)
          for (const auto& u : parts[i])
            for (const auto& v : parts[j]) out.emplace_back(u, v);
      break;
    }
    case HostKind::LexCycle: {
      // Columns i and i+1 joined completely; for m=3 every column pair is
      // consecutive exactly once.
      for (int i = 0; i < m; ++i) {
        int ni = (i + 1) % m;
        for (int y = 0; y < n; ++y)
          for (int y2 = 0; y2 < n; ++y2)
            out.emplace_back(Vertex::residue({i, y}), Vertex::residue({ni, y2}));
      }
      break;
    }
    case HostKind::Cayley: {
      // Connection must be a symmetric multiset avoiding the identity.
      std::map<std::vector<int>, int> mult;
      for (const auto& s : connection) ++mult[s];
      const std::vector<int> zero(space.moduli.size(), 0);
      if (mult.count(zero))
        throw DesignError("REJECT_HOST", "connection contains the identity");
      for (const auto& [s, c] : mult) {
        std::vector<int> neg(s.size());
        for (size_t i = 0; i < s.size(); ++i) neg[i] = imod(-s[i], space.moduli[i]);
        auto it = mult.find(neg);
        if (it == mult.end() || it->second != c)
          throw DesignError("REJECT_HOST", "connection multiset is not symmetric");
      }
      // Each unordered edge arises once from s and once from -s; halve counts.
      std::map<Edge, long long> ecount;
      auto vs = space.vertices();
      for (const auto& v : vs) {
        for (const auto& s : connection) {
          std::vector<int> w(v.coords.size());
          bool involution_fixed = true;
          for (size_t i = 0; i < w.size(); ++i) {
            w[i] = imod(v.coords[i] + s[i], space.moduli[i]);
            if (imod(2 * s[i], space.moduli[i]) != 0) involution_fixed = false;
          }
          if (involution_fixed) {
            // s == -s: each such s yields each edge twice over v in {v, v+s}.
            (void)0;
          }
          Vertex u = Vertex::residue(w);
          if (u == v) throw DesignError("REJECT_HOST", "identity in connection");
          ++ecount[Edge(v, u)];
        }
      }
      for (const auto& [e, c] : ecount) {
        if (c % 2 != 0) throw DesignError("REJECT_HOST", "asymmetric edge count");
        for (long long i = 0; i < c / 2; ++i) out.push_back(e);
      }
      return out;  // map iteration is already sorted
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> materialize_edges(const HostGraph& host) { return host.edges(); }

Profile measure_profile(const std::vector<FactorClass>& classes) {
  std::map<std::pair<FactorKind, int>, int> counts;
  for (const auto& f : classes) {
    int len = (f.kind == FactorKind::TwoFactorMixed || f.kind == FactorKind::OneFactor)
                  ? 0
                  : f.length;
    ++counts[{f.kind, len}];
  }
  Profile p;
  for (const auto& [key, c] : counts) p.push_back({key.first, key.second, c});
  std::sort(p.begin(), p.end());
  return p;
}

std::string to_string(const Profile& p) {
  std::ostringstream os;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) os << " + ";
    os << p[i].count << "x" << to_string(p[i].kind);
    if (p[i].length) os << "(" << p[i].length << ")";
  }
  return os.str();
}

void Provenance::param(const std::string& key, long long value) {
  params.emplace_back(key, std::to_string(value));
}
void Provenance::param(const std::string& key, const std::string& value) {
  params.emplace_back(key, value);
}

DevelopmentRule DevelopmentRule::translation(std::vector<int> step, int orbit_length) {
  DevelopmentRule r;
  r.translate.assign(step.size(), false);
  for (size_t i = 0; i < step.size(); ++i) r.translate[i] = (step[i] != 0);
  r.step = std::move(step);
  r.orbit_length = orbit_length;
  return r;
}

Vertex translate_vertex(const Vertex& v, const std::vector<int>& offset,
                        const std::vector<bool>& translate,
                        const std::vector<int>& moduli) {
  if (!v.is_residue()) return v;
  if (v.coords.size() != moduli.size())
    throw DesignError("REJECT_PARAMS", "vertex arity does not match moduli");
  std::vector<int> c = v.coords;
  for (size_t i = 0; i < c.size(); ++i)
    if (translate.empty() || translate[i]) c[i] = imod(c[i] + offset[i], moduli[i]);
  return Vertex::residue(std::move(c));
}

CycleSeq translate_cycle(const CycleSeq& c, const std::vector<int>& offset,
                         const std::vector<bool>& translate,
                         const std::vector<int>& moduli) {
  std::vector<Vertex> vs;
  vs.reserve(c.vertices.size());
  for (const auto& v : c.vertices)
    vs.push_back(translate_vertex(v, offset, translate, moduli));
  return CycleSeq(std::move(vs)).canonical();
}

std::vector<FactorClass> develop(const FactorClass& base, const DevelopmentRule& rule,
                                 const std::vector<int>& moduli) {
  if (rule.step.size() != moduli.size())
    throw DesignError("REJECT_PARAMS", "development step arity mismatch");
  std::vector<FactorClass> out;
  out.reserve(rule.orbit_length);
  for (int i = 0; i < rule.orbit_length; ++i) {
    std::vector<int> off(rule.step.size());
    for (size_t j = 0; j < off.size(); ++j)
      off[j] = imod(static_cast<long long>(rule.step[j]) * i, moduli[j]);
    FactorClass f;
    f.kind = base.kind;
    f.length = base.length;
    if (base.missing)
      f.missing = translate_vertex(*base.missing, off, rule.translate, moduli);
    for (const auto& c : base.cycles)
      f.cycles.push_back(translate_cycle(c, off, rule.translate, moduli));
    for (const auto& e : base.pairs)
      f.pairs.push_back(Edge(translate_vertex(e.a, off, rule.translate, moduli),
                             translate_vertex(e.b, off, rule.translate, moduli)));
    out.push_back(f.canonical());
  }
  return out;
}

}  // namespace hwdesign
