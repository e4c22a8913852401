#include "hwdesign/verify.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hwdesign {

namespace {

class ViolationSink {
 public:
  explicit ViolationSink(VerifyReport& r) : r_(r) {}
  void add(std::string code, int class_index, std::string witness) {
    ++total_;
    if (r_.violations.size() < 10)
      r_.violations.push_back({std::move(code), class_index, std::move(witness)});
    else
      ++r_.suppressed;
  }
  bool any() const { return total_ > 0; }

 private:
  VerifyReport& r_;
  long long total_ = 0;
};

struct VertexIndex {
  std::vector<Vertex> verts;  // sorted
  int lookup(const Vertex& v) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) return -1;
    return static_cast<int>(it - verts.begin());
  }
};

long long ekey(int a, int b, int n) { return static_cast<long long>(a) * n + b; }

// Shape checks for one class; appends per-vertex cover counts for spanning
// checks. Returns false if the class is too malformed to use further.
bool check_class_shape(const FactorClass& f, int ci, const VertexIndex& vx,
                       ViolationSink& sink, std::vector<int>& cover) {
  const int n = static_cast<int>(vx.verts.size());
  cover.assign(n, 0);
  bool usable = true;
  auto touch = [&](const Vertex& v) {
    int i = vx.lookup(v);
    if (i < 0) {
      sink.add("FOREIGN_VERTEX", ci, to_string(v));
      usable = false;
      return;
    }
    ++cover[i];
  };
  if (f.kind == FactorKind::OneFactor) {
    if (!f.cycles.empty()) sink.add("BAD_CLASS", ci, "one_factor class has cycles");
    for (const auto& e : f.pairs) {
      touch(e.a);
      touch(e.b);
    }
  } else {
    if (!f.pairs.empty()) sink.add("BAD_CLASS", ci, "cycle class has pairs");
    for (const auto& c : f.cycles) {
      if (c.length() < 3) {
        sink.add("BAD_CLASS", ci, "cycle of length " + std::to_string(c.length()));
        usable = false;
        continue;
      }
      std::set<Vertex> seen;
      for (const auto& v : c.vertices) {
        if (!seen.insert(v).second)
          sink.add("BAD_CLASS", ci, "repeated vertex " + to_string(v) + " in a cycle");
        touch(v);
      }
      bool uniform_kind = f.kind != FactorKind::TwoFactorMixed;
      if (uniform_kind && c.length() != f.length)
        sink.add("BAD_CLASS", ci,
                 "cycle length " + std::to_string(c.length()) + " expected " +
                     std::to_string(f.length));
    }
  }
  int over = -1, missing_count = 0;
  for (int i = 0; i < n; ++i) {
    if (cover[i] > 1 && over < 0) over = i;
    if (cover[i] == 0) ++missing_count;
  }
  if (over >= 0) {
    sink.add("BAD_CLASS", ci, "vertex " + to_string(vx.verts[over]) + " covered twice");
    usable = false;
  }
  switch (f.kind) {
    case FactorKind::TwoFactorUniform:
    case FactorKind::TwoFactorMixed:
    case FactorKind::OneFactor:
      if (missing_count != 0)
        sink.add("BAD_CLASS", ci,
                 std::to_string(missing_count) + " host vertices uncovered");
      break;
    case FactorKind::AlmostParallel: {
      if (!f.missing) {
        sink.add("BAD_CLASS", ci, "almost parallel class without missing vertex");
        break;
      }
      int mi = vx.lookup(*f.missing);
      if (mi < 0) {
        sink.add("BAD_CLASS", ci, "missing vertex outside host");
        break;
      }
      if (cover[mi] != 0)
        sink.add("BAD_CLASS", ci, "declared missing vertex is covered");
      if (missing_count != 1)
        sink.add("BAD_CLASS", ci,
                 "almost parallel class misses " + std::to_string(missing_count) +
                     " vertices");
      break;
    }
    case FactorKind::HalfParallel:
      // Partial class: coverage counted, size checked at certificate level.
      break;
  }
  return usable;
}

void check_edge_partition(const Certificate& cert, const VertexIndex& vx,
                          ViolationSink& sink) {
  const int n = static_cast<int>(vx.verts.size());
  std::unordered_map<long long, long long> need;
  for (const auto& e : cert.host.edges()) {
    int a = vx.lookup(e.a), b = vx.lookup(e.b);
    ++need[ekey(a, b, n)];
  }
  for (size_t ci = 0; ci < cert.classes.size(); ++ci) {
    for (const auto& e : cert.classes[ci].edges()) {
      int a = vx.lookup(e.a), b = vx.lookup(e.b);
      if (a < 0 || b < 0) continue;  // already reported as FOREIGN_VERTEX
      auto it = need.find(ekey(a, b, n));
      if (it == need.end())
        sink.add("EXTRA_EDGE", static_cast<int>(ci), to_string(e));
      else if (it->second == 0)
        sink.add("DOUBLE_COVERED_EDGE", static_cast<int>(ci), to_string(e));
      else
        --it->second;
    }
  }
  for (const auto& [key, c] : need) {
    if (c > 0) {
      Edge e(vx.verts[static_cast<size_t>(key / n)], vx.verts[static_cast<size_t>(key % n)]);
      sink.add("UNCOVERED_EDGE", -1, to_string(e) + " x" + std::to_string(c));
    }
  }
}

}  // namespace

std::string VerifyReport::summary() const {
  if (valid) return "VALID " + to_string(measured);
  std::ostringstream os;
  os << "INVALID";
  for (const auto& v : violations) {
    os << "\n  " << v.code;
    if (v.class_index >= 0) os << " class=" << v.class_index;
    os << " " << v.witness;
  }
  if (suppressed) os << "\n  (+" << suppressed << " more)";
  return os.str();
}

VerifyReport check_certificate(const Certificate& cert) {
  VerifyReport r;
  ViolationSink sink(r);
  VertexIndex vx{cert.host.vertex_set()};
  const long long v = static_cast<long long>(vx.verts.size());

  std::vector<int> cover;
  std::vector<Vertex> missing_vertices;
  std::vector<Vertex> half_vertices;
  long long almost = 0, half = 0;
  int half_k = 0;
  for (size_t ci = 0; ci < cert.classes.size(); ++ci) {
    const auto& f = cert.classes[ci];
    check_class_shape(f, static_cast<int>(ci), vx, sink, cover);
    if (f.kind == FactorKind::AlmostParallel) {
      ++almost;
      if (f.missing) missing_vertices.push_back(*f.missing);
    } else if (f.kind == FactorKind::HalfParallel) {
      ++half;
      half_k = f.length;
      for (const auto& c : f.cycles)
        half_vertices.insert(half_vertices.end(), c.vertices.begin(), c.vertices.end());
    }
  }

  check_edge_partition(cert, vx, sink);

  r.measured = measure_profile(cert.classes);
  if (r.measured != cert.profile)
    sink.add("PROFILE_MISMATCH", -1,
             "claimed [" + to_string(cert.profile) + "] measured [" +
                 to_string(r.measured) + "]");

  if (almost > 0 || half > 0) {
    // Almost resolvable system counting: (v-1)/2 almost parallel classes and
    // one half parallel class of (v-1)/(2k) cycles.
    if (half != 1)
      sink.add("ARCS_COUNTS", -1, std::to_string(half) + " half parallel classes");
    if (half == 1) {
      int k = half_k;
      if (k <= 0 || (v - 1) % (2 * k) != 0)
        sink.add("ARCS_COUNTS", -1, "order " + std::to_string(v) + " not 1 mod 2k");
      else {
        if (almost != (v - 1) / 2)
          sink.add("ARCS_COUNTS", -1,
                   std::to_string(almost) + " almost parallel classes, expected " +
                       std::to_string((v - 1) / 2));
        long long half_cycles = static_cast<long long>(half_vertices.size()) / k;
        if (half_cycles != (v - 1) / (2 * k))
          sink.add("ARCS_COUNTS", -1,
                   std::to_string(half_cycles) + " half class cycles, expected " +
                       std::to_string((v - 1) / (2 * k)));
      }
    }
    std::string why;
    if (!check_alignment(cert, &why)) sink.add("ALIGNMENT", -1, why);
  }

  r.valid = !sink.any();
  return r;
}

VerifyReport check_frame(const Certificate& cert, int k) {
  if (cert.host.kind != HostKind::Multipartite)
    throw DesignError("REJECT_HOST", "frame check needs a multipartite host");
  const auto& parts = cert.host.parts;
  if (parts.size() < 2) throw DesignError("REJECT_PARTS", "fewer than 2 parts");
  const size_t g = parts[0].size();
  for (const auto& p : parts)
    if (p.size() != g) throw DesignError("REJECT_PARTS", "unequal part sizes");
  if (g % 2 != 0) throw DesignError("REJECT_PARTS", "odd part size");

  VerifyReport r;
  ViolationSink sink(r);
  VertexIndex vx{cert.host.vertex_set()};
  const int n = static_cast<int>(vx.verts.size());

  // part id per vertex
  std::vector<int> part_of(n, -1);
  for (size_t pi = 0; pi < parts.size(); ++pi)
    for (const auto& v : parts[pi]) part_of[vx.lookup(v)] = static_cast<int>(pi);

  std::vector<long long> misses(parts.size(), 0);
  std::vector<int> cover;
  for (size_t ci = 0; ci < cert.classes.size(); ++ci) {
    const auto& f = cert.classes[ci];
    if (f.kind != FactorKind::TwoFactorUniform || f.length != k) {
      sink.add("BAD_CLASS", static_cast<int>(ci), "not a uniform C_k class");
      continue;
    }
    cover.assign(n, 0);
    bool ok = true;
    for (const auto& c : f.cycles) {
      if (c.length() != k) {
        sink.add("BAD_CLASS", static_cast<int>(ci), "cycle length != k");
        ok = false;
      }
      for (const auto& v : c.vertices) {
        int i = vx.lookup(v);
        if (i < 0) {
          sink.add("FOREIGN_VERTEX", static_cast<int>(ci), to_string(v));
          ok = false;
        } else {
          ++cover[i];
        }
      }
    }
    if (!ok) continue;
    // must cover everything except exactly one whole part
    int missed_part = -1;
    bool bad = false;
    for (int i = 0; i < n && !bad; ++i) {
      if (cover[i] == 0) {
        if (missed_part < 0) missed_part = part_of[i];
        if (part_of[i] != missed_part) bad = true;
      } else if (cover[i] > 1) {
        bad = true;
      }
    }
    if (!bad && missed_part >= 0) {
      for (const auto& v : parts[missed_part])
        if (cover[vx.lookup(v)] != 0) bad = true;
    }
    if (bad || missed_part < 0) {
      sink.add("BAD_CLASS", static_cast<int>(ci), "not a holey factor of one part");
      continue;
    }
    ++misses[missed_part];
  }
  for (size_t pi = 0; pi < parts.size(); ++pi)
    if (misses[pi] != static_cast<long long>(g) / 2)
      sink.add("REJECT_COUNTS", -1,
               "part " + std::to_string(pi) + " missed by " +
                   std::to_string(misses[pi]) + " classes, expected " +
                   std::to_string(g / 2));

  check_edge_partition(cert, vx, sink);
  r.measured = measure_profile(cert.classes);
  r.valid = !sink.any();
  return r;
}

std::vector<int> difference_list(const FactorClass& f, int j, int jp, int modulus) {
  std::vector<int> out;
  for (const auto& e : f.edges()) {
    if (!e.a.is_residue() || !e.b.is_residue()) continue;
    if (e.a.coords.size() != 2 || e.b.coords.size() != 2)
      throw DesignError("REJECT_PARAMS", "difference list needs 2-coordinate residues");
    int la = e.a.coords[1], lb = e.b.coords[1];
    if (la == j && lb == jp) out.push_back(imod(e.a.coords[0] - e.b.coords[0], modulus));
    if (j != jp && lb == j && la == jp)
      out.push_back(imod(e.b.coords[0] - e.a.coords[0], modulus));
    if (j == jp && la == j && lb == j)
      out.push_back(imod(e.b.coords[0] - e.a.coords[0], modulus));
  }
  std::sort(out.begin(), out.end());
  return out;
}

StarterCheck check_starter_conditions(const std::vector<FactorClass>& f_cycles,
                                      char variant, int k, int d,
                                      const Vertex& missing) {
  StarterCheck out;
  std::vector<std::string>& bad = out.failures;
  if (variant != 'A' && variant != 'B') {
    bad.push_back("unknown variant");
    return out;
  }
  const int u = variant == 'A' ? k : 3 * k;
  if (variant == 'B' && d != 3) bad.push_back("variant B requires d=3");
  if (variant == 'A' && std::gcd(d, k) != 1) bad.push_back("gcd(d,k) != 1");

  // Collect the cycles into one 2-factor.
  FactorClass all;
  all.kind = FactorKind::TwoFactorMixed;
  int ncycles = 0;
  for (const auto& f : f_cycles) {
    for (const auto& c : f.cycles) {
      if (c.length() != k) bad.push_back("cycle of length != k");
      all.cycles.push_back(c);
      ++ncycles;
    }
  }
  const int expect_cycles = variant == 'A' ? 2 : 6;
  if (ncycles != expect_cycles)
    bad.push_back("expected " + std::to_string(expect_cycles) + " cycles, got " +
                  std::to_string(ncycles));

  // Vertex set: (Z_u x Z_2 + inf) minus {missing}.
  VertexSpace sp;
  sp.moduli = {u, 2};
  sp.has_infinity = true;
  std::vector<Vertex> want = sp.vertices();
  if (!missing.is_residue()) bad.push_back("missing vertex must be a residue");
  want.erase(std::remove(want.begin(), want.end(), missing), want.end());
  std::vector<Vertex> got = all.covered_vertices();
  if (got != want) bad.push_back("vertex set is not (Z_u x Z_2 + inf) - missing");

  // Infinity's neighbours must lie on both levels.
  std::set<int> inf_levels;
  int inf_degree = 0;
  for (const auto& e : all.edges()) {
    const Vertex *other = nullptr;
    if (e.a.tag == Vertex::Tag::Infinity) other = &e.b;
    else if (e.b.tag == Vertex::Tag::Infinity) other = &e.a;
    if (other) {
      ++inf_degree;
      if (other->is_residue() && other->coords.size() == 2)
        inf_levels.insert(other->coords[1]);
    }
  }
  if (inf_degree != 2) bad.push_back("infinity does not have degree 2");
  if (inf_levels != std::set<int>{0, 1})
    bad.push_back("infinity's neighbours do not use both levels");

  // Difference lists, exact.
  auto expect = [&](std::vector<int> want_list, int j, int jp, const char* name) {
    std::sort(want_list.begin(), want_list.end());
    if (difference_list(all, j, jp, u) != want_list)
      bad.push_back(std::string("difference list ") + name + " mismatch");
  };
  std::vector<int> zu, zu0, zu0d;
  for (int x = 0; x < u; ++x) {
    zu.push_back(x);
    if (x != 0) zu0.push_back(x);
    if (x != 0 && x != imod(d, u) && x != imod(-d, u)) zu0d.push_back(x);
  }
  expect(zu0, 0, 0, "(0,0)");
  expect(zu, 0, 1, "(0,1)");
  expect(zu0d, 1, 1, "(1,1)");

  out.ok = bad.empty();
  return out;
}

bool check_alignment(const Certificate& cert, std::string* why) {
  std::vector<Vertex> missing, halfv;
  for (const auto& f : cert.classes) {
    if (f.kind == FactorKind::AlmostParallel && f.missing)
      missing.push_back(*f.missing);
    if (f.kind == FactorKind::HalfParallel)
      for (const auto& c : f.cycles)
        halfv.insert(halfv.end(), c.vertices.begin(), c.vertices.end());
  }
  std::sort(missing.begin(), missing.end());
  if (std::adjacent_find(missing.begin(), missing.end()) != missing.end()) {
    if (why) *why = "repeated missing vertex";
    return false;
  }
  std::sort(halfv.begin(), halfv.end());
  if (missing != halfv) {
    if (why) *why = "missing vertices != half class vertex set";
    return false;
  }
  return true;
}

}  // namespace hwdesign
