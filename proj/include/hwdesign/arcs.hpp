#pragma once

#include "hwdesign/result.hpp"
#include "hwdesign/verify.hpp"

namespace hwdesign::arcs {

// Starter 2-factor for an almost resolvable k-cycle system over
// (Z_u x Z_2) + inf with u = k (variant A, order 2k+1) or u = 3k
// (variant B, order 6k+1), always missing (0,1).
struct Starter {
  char variant = 'A';  // 'A' or 'B'
  int k = 0;
  int d = 0;
  std::vector<CycleSeq> cycles;  // 2 (A) or 6 (B) k-cycles
};

// Closed-form starters for odd k >= 9 (variant A) / odd k >= 9 (variant B).
Starter starter_2k1(int k);
Starter starter_6k1(int k);

// Develops a starter into a full almost resolvable cycle system certificate:
// kt almost parallel classes by (+1 mod u, -) plus the half parallel class.
Certificate expand_starter(const Starter& st);

// Builds a k-ARCS(2kt+1) from a (k,1)-cycle frame of type (2k)^t and t
// verified k-ARCS(2k+1) (one per part, in part order).
Certificate fill_frame(const Certificate& frame,
                       const std::vector<Certificate>& bases, int k);

// Top-level dispatcher: closed-form starters for odd k >= 9 (t = 1, 3),
// frame composition for t >= 4, registry (fixture cache / search) otherwise.
BuildResult build_arcs(int k, int t);

enum class ArcsStatus { Exists, Nonexistent, Open };

struct ArcsClassification {
  ArcsStatus status = ArcsStatus::Open;
  std::string via;  // which table/range decided it
};

// Existence classification per the published tables, without constructing.
ArcsClassification arcs_status(int k, int t);

}  // namespace hwdesign::arcs
