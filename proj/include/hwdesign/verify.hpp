#pragma once

#include "hwdesign/model.hpp"

#include <map>

namespace hwdesign {

struct Violation {
  std::string code;    // UNCOVERED_EDGE, DOUBLE_COVERED_EDGE, BAD_CLASS, ...
  int class_index = -1;
  std::string witness;
};

struct VerifyReport {
  bool valid = false;
  std::vector<Violation> violations;  // at most 10 witnesses kept
  long long suppressed = 0;           // violations beyond the first 10
  Profile measured;

  std::string summary() const;
};

// Full certificate check: class shape invariants, spanning/missing-vertex
// rules, exact edge-multiset partition of the host, profile agreement, and
// (when almost/half parallel classes are present) the almost resolvable
// counting and alignment rules.
VerifyReport check_certificate(const Certificate& cert);

// Holey-factorization check: host must be multipartite with equal part sizes;
// every class must be a holey C_k-factor (cycles of length k covering all
// vertices except exactly one whole part), g/2 classes missing each part, and
// the classes must partition the host edges.
VerifyReport check_frame(const Certificate& cert, int k);

// Ordered difference list Delta_{(j,j')}: for every edge of F joining (x,j)
// and (y,j'), the value x - y mod `modulus` (and y - x when j == j').
// Vertices must be 2-coordinate residues with second coordinate = level.
std::vector<int> difference_list(const FactorClass& f, int j, int jp, int modulus);

// Conditions on a starter 2-factor F for almost resolvable cycle system
// expansion. Variant A works over Z_k x Z_2 with gcd(d,k)=1; variant B over
// Z_{3k} x Z_2 with d=3. F must consist of 2 (A) or 6 (B) k-cycles on
// (Z_u x Z_2 + inf) minus {(a,b)}, infinity's neighbours must lie on both
// levels, and the difference lists must be exactly:
//   Delta00 = Z_u - {0},  Delta01 = Z_u,  Delta11 = Z_u - {0, d, -d}.
struct StarterCheck {
  bool ok = false;
  std::vector<std::string> failures;
};
StarterCheck check_starter_conditions(const std::vector<FactorClass>& f_cycles,
                                      char variant, int k, int d,
                                      const Vertex& missing);

// Alignment of an almost resolvable certificate: the missing vertices of the
// almost parallel classes are pairwise distinct and together equal the vertex
// set of the half parallel class.
bool check_alignment(const Certificate& cert, std::string* why = nullptr);

}  // namespace hwdesign
