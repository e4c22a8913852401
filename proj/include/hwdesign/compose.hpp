#pragma once

#include <map>

#include "hwdesign/result.hpp"

namespace hwdesign::compose {

// One resolved (or unresolved) sub-design request of a pipeline run.
struct IngredientRequest {
  std::string description;  // e.g. "HW(39;3,13;19,0)"
  std::string resolution;   // "builder:...", "fixture:...", "cache:...", "" if unresolved
};

// Glues a 2-factorization of the complete multipartite graph on u parts of
// size g together with u copies of a 2-factorization of the complete graph
// on g vertices into one of the complete graph on g*u vertices. Outer classes
// stand alone; the i-th inner class of every copy unites into one class.
// Exactly one side may carry a perfect matching (inner when g is even, outer
// when g is odd and u is even); it becomes the deleted 1-factor.
BuildResult c_rgdd(const Certificate& outer, const std::vector<Certificate>& inner);

// Blows every vertex of the outer host up by s and fills each outer
// 2-factor with a 2-factorization of the blown cycle: fills[i], hosted on
// the lex cycle C_L[s] with L the cycle length of outer class i, is copied
// onto every cycle of that class. Each outer class becomes s classes, so the
// short and long factor counts obey alpha' + beta' = (alpha + beta) * s.
BuildResult l351(const Certificate& outer, const std::vector<Certificate>& fills);

// Embedded explicit designs, by catalog name:
//   L4.1  (6,5)  split of C_3[11]    L4.2  (8,5)  split of C_3[13]
//   L4.3  (8,7)  split of C_3[15]    L4.5  (6,10) split of K_33
//   L4.6  (9,8)  split of K_35       L4.7  (8,11) split of K_39
//   L3.11 (28,6) split of the row block on Z_17 x Z_35
// Throws REJECT_PARAMS on an unknown name.
Certificate fixture(const std::string& name);

// Small classical ingredients, realized by templates or bounded search.
struct ClassicalRequest {
  enum class Kind {
    HamiltonComplete,    // K_v into (v-1)/2 spanning cycles, v odd
    MultipartiteCycles,  // C_k-factorization of the multipartite K_u[g]
    LexCycleFactor,      // C_m-factorization of C_m[n]
    LexHamilton,         // C_{mn}-factorization of C_m[n]
  };
  Kind kind = Kind::HamiltonComplete;
  int v = 0;           // HamiltonComplete
  int k = 0, u = 0, g = 0;  // MultipartiteCycles
  int m = 0, n = 0;    // LexCycleFactor / LexHamilton
};
BuildResult classical(const ClassicalRequest& req);

// C_k-factorization of K_u[g] (g=1 means the complete graph): existence
// conditions, then template / cache / bounded search. The workhorse behind
// classical() and the pipelines.
BuildResult resolvable_kug(int k, int u, int g);

// Multi-stage builds, by name:
//   "Lemma4.8"   params u in {5,7}, beta in {9,11}       -> HW(9u;u,9)
//   "Lemma4.9"   params t odd > 1                        -> HW(39t;3,13;(39t-11)/2,5)
//   "Lemma4.10"  params u in {5,7}, t odd > 1, beta in {5,7} -> HW(9tu;u,9)
//   "Theorem1.4" params k odd >= 3, t >= 1, beta         -> HW(k(2kt+1);k,2kt+1)
//   "Theorem1.5" params k >= 1, t >= 2, u >= 1, alpha    -> HW(4ktu;4k,4kt)
// Unresolvable sub-designs yield MissingIngredient with the needed items.
BuildResult pipeline(const std::string& name,
                     const std::map<std::string, long long>& params);

// Existence classification for HW(v;m,n;alpha,beta) without constructing.
struct HwpStatus {
  enum class Kind { Solvable, NecessaryFail, Open };
  Kind kind = Kind::Open;
  std::string recipe;  // Solvable: which construction route
  std::string reason;  // NecessaryFail: the violated condition
  std::string tag;     // Open: which exception bucket
};
HwpStatus hwp_status(long long v, int m, int n, long long alpha, long long beta);

// Classifies the tuple and, when a recipe with an in-repo constructor is
// known, runs it. SOLVABLE tuples whose construction lives only in the cited
// literature come back MISSING_INGREDIENT.
BuildResult build_hw(long long v, int m, int n, long long alpha, long long beta);
std::string to_string(const HwpStatus& s);

}  // namespace hwdesign::compose
