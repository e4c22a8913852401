#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwdesign {

// Error with a short machine-readable code (REJECT_HOST, REJECT_PARAMS, ...).
class DesignError : public std::runtime_error {
 public:
  DesignError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// A point of the designs: a residue tuple of a product group, the adjoined
// point "inf", or a named extra label (a/b/c style).
// Total order: infinity < labels (lexicographic) < residues (lexicographic).
struct Vertex {
  enum class Tag : std::uint8_t { Infinity = 0, Label = 1, Residue = 2 };

  Tag tag = Tag::Infinity;
  std::string label;        // Tag::Label only
  std::vector<int> coords;  // Tag::Residue only

  static Vertex infinity() { return Vertex{}; }
  static Vertex named(std::string name) {
    Vertex v;
    v.tag = Tag::Label;
    v.label = std::move(name);
    return v;
  }
  static Vertex residue(std::vector<int> coords) {
    Vertex v;
    v.tag = Tag::Residue;
    v.coords = std::move(coords);
    return v;
  }
  // Residue reduced into [0, modulus) coordinatewise; accepts negatives.
  static Vertex residue_mod(std::vector<int> coords, const std::vector<int>& moduli);

  bool is_residue() const { return tag == Tag::Residue; }

  auto operator<=>(const Vertex&) const = default;
};

std::string to_string(const Vertex& v);

// Unordered vertex pair, stored with a <= b.
struct Edge {
  Vertex a, b;
  Edge() = default;
  Edge(Vertex x, Vertex y);
  auto operator<=>(const Edge&) const = default;
};

std::string to_string(const Edge& e);

// The vertex universe of a host graph: all residue tuples over `moduli`,
// optionally the point at infinity, optionally extra labels.
struct VertexSpace {
  std::vector<int> moduli;
  bool has_infinity = false;
  std::vector<std::string> labels;

  std::vector<Vertex> vertices() const;  // canonical (sorted) order
  long long size() const;

  auto operator<=>(const VertexSpace&) const = default;
};

// A cycle as an ordered vertex sequence, length >= 3, all vertices distinct.
// Canonical form: rotated so the minimum vertex is first, direction chosen so
// the second vertex is smaller than the last.
struct CycleSeq {
  std::vector<Vertex> vertices;

  CycleSeq() = default;
  explicit CycleSeq(std::vector<Vertex> vs) : vertices(std::move(vs)) {}

  int length() const { return static_cast<int>(vertices.size()); }
  CycleSeq canonical() const;
  std::vector<Edge> edges() const;

  auto operator<=>(const CycleSeq&) const = default;
};

enum class FactorKind : std::uint8_t {
  TwoFactorUniform,  // all cycles length k, spans host
  TwoFactorMixed,    // spans host, any cycle lengths
  AlmostParallel,    // all length k, spans host minus one vertex
  HalfParallel,      // all length k, (v-1)/(2k) cycles
  OneFactor,         // perfect matching
};

std::string to_string(FactorKind k);

// One class of a 2-factorization-like structure.
struct FactorClass {
  FactorKind kind = FactorKind::TwoFactorUniform;
  int length = 0;                 // k, unused for mixed/one_factor
  std::optional<Vertex> missing;  // AlmostParallel only
  std::vector<CycleSeq> cycles;   // all kinds but OneFactor
  std::vector<Edge> pairs;        // OneFactor only

  std::vector<Edge> edges() const;
  std::vector<Vertex> covered_vertices() const;  // sorted, with duplicates kept
  FactorClass canonical() const;

  auto operator<=>(const FactorClass&) const = default;
};

enum class HostKind : std::uint8_t {
  Complete,
  CompleteMinusOneFactor,
  Multipartite,
  LexCycle,
  Cayley,
};

std::string to_string(HostKind k);

// Symbolic host graph with an exact edge-multiset materializer.
struct HostGraph {
  HostKind kind = HostKind::Complete;
  VertexSpace space;                        // Complete / CompleteMinus1F / Cayley
  std::vector<Edge> one_factor;             // CompleteMinusOneFactor
  std::vector<std::vector<Vertex>> parts;   // Multipartite
  int m = 0, n = 0;                         // LexCycle
  std::vector<std::vector<int>> connection; // Cayley, multiset of group elements

  static HostGraph complete(VertexSpace space);
  static HostGraph complete_minus_one_factor(VertexSpace space, std::vector<Edge> f);
  static HostGraph multipartite(std::vector<std::vector<Vertex>> parts);
  static HostGraph lex_cycle(int m, int n);
  static HostGraph cayley(std::vector<int> moduli, std::vector<std::vector<int>> connection);

  std::vector<Vertex> vertex_set() const;  // sorted
  long long vertex_count() const;
  // Exact multiset of unordered vertex pairs, sorted. Throws REJECT_HOST on a
  // non-symmetric Cayley connection multiset or one containing the identity.
  std::vector<Edge> edges() const;

  auto operator<=>(const HostGraph&) const = default;
};

// materialize_edges per the spec name; same as host.edges().
std::vector<Edge> materialize_edges(const HostGraph& host);

struct ProfileEntry {
  FactorKind kind = FactorKind::TwoFactorUniform;
  int length = 0;
  int count = 0;
  auto operator<=>(const ProfileEntry&) const = default;
};

using Profile = std::vector<ProfileEntry>;  // sorted, aggregated

Profile measure_profile(const std::vector<FactorClass>& classes);
std::string to_string(const Profile& p);

struct Provenance {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> ingredients;  // ingredient tree, one line each

  void param(const std::string& key, long long value);
  void param(const std::string& key, const std::string& value);
  auto operator<=>(const Provenance&) const = default;
};

// The unit of verification and file I/O.
struct Certificate {
  HostGraph host;
  std::vector<FactorClass> classes;
  Profile profile;
  Provenance provenance;

  auto operator<=>(const Certificate&) const = default;
};

// Translation rule used to expand base classes into orbits. Coordinates with
// translate=false are held fixed; infinity and labels are always fixed.
struct DevelopmentRule {
  std::vector<int> step;        // per coordinate
  std::vector<bool> translate;  // per coordinate
  int orbit_length = 1;

  static DevelopmentRule translation(std::vector<int> step, int orbit_length);
};

Vertex translate_vertex(const Vertex& v, const std::vector<int>& offset,
                        const std::vector<bool>& translate,
                        const std::vector<int>& moduli);

// dev_Sigma(base): returns orbit_length classes, class i translated by i*step.
// The missing vertex of an almost parallel class translates along.
std::vector<FactorClass> develop(const FactorClass& base, const DevelopmentRule& rule,
                                 const std::vector<int>& moduli);

CycleSeq translate_cycle(const CycleSeq& c, const std::vector<int>& offset,
                         const std::vector<bool>& translate,
                         const std::vector<int>& moduli);

inline int imod(long long x, int m) {
  int r = static_cast<int>(x % m);
  return r < 0 ? r + m : r;
}

}  // namespace hwdesign
