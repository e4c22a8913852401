#pragma once

#include <map>
#include <optional>

#include "hwdesign/result.hpp"

namespace hwdesign::cayley {

// Base cycles given by their second coordinates: row j describes the cycle
// ((0,0), (axis_step, b_{j,1}), (2*axis_step, b_{j,2}), ...) on Z_m x Z_n,
// developed by (-, +1 mod n) into one C_m-factor per row.
struct BaseRowTable {
  int m = 0, n = 0;
  int axis_step = 1;                   // first-coordinate increment per step
  std::vector<std::vector<int>> rows;  // each row: m-1 values b_{j,1..m-1}
};

// One C_m-factor per row (n translates of the base cycle each). Throws
// REJECT_ROW when a row repeats a vertex or the axis step is degenerate.
std::vector<FactorClass> develop_rows(const BaseRowTable& table);

// Difference-class bookkeeping on Cay(Z_m x Z_n, .): tracks how many edges of
// each connection class remain unconsumed. A class is the unordered pair
// {(dx,dy), (-dx,-dy)}.
struct DifferenceBudget {
  int m = 0, n = 0;
  std::map<std::pair<int, int>, long long> remaining;
  std::vector<std::string> log;

  explicit DifferenceBudget(const HostGraph& host);
  // Normalized class key for an edge between residue vertices.
  std::pair<int, int> key(const Edge& e) const;
  // Subtracts the edges of each class; throws REJECT_COUNTS on overdraw.
  void consume(const std::vector<FactorClass>& classes, const std::string& who);
  bool empty() const;
};

// Difference-class factorization requests:
//   TwoCn:  2 C_n-factors on {+-1} x {+-d},  gcd(d, n) = 1
//   FourCn: 4 C_n-factors on {+-1} x {+-d1, +-d2}
//   FiveCm: 5 C_m-factors on {+-i} x (+-{0, a, 2a})
//   FiveCn: 5 C_n-factors on {+-1} x (+-{0, 1, 2})  (search-backed)
enum class DiffKind { TwoCn, FourCn, FiveCm, FiveCn };

struct DiffRequest {
  DiffKind kind = DiffKind::TwoCn;
  int d1 = 0, d2 = 0;  // TwoCn uses d1; FourCn uses d1, d2
  int i = 1, a = 1;    // FiveCm
};

// Returns the stated factors on Z_m x Z_n, or nullopt when search fails.
// Throws REJECT_PARAMS on precondition violations.
std::optional<std::vector<FactorClass>> difference_factorization(
    int m, int n, const DiffRequest& req);

// 2 C_m-factors + (n-2) C_n-factors of C_m[n], n = 3 mod 6, n >= 9,
// 3 <= m <= n, m odd.
BuildResult lemma_cmn_two(int m, int n);

// 4 C_m-factors + 5 C_9-factors of C_m[9], m odd >= 5.
BuildResult lemma_cm9(int m);

// kt+1 C_k-factors of Cay(Z_k x Z_{2kt+1}, {0}x(Z∖{0}) ∪ {+-1}x{0}) from an
// aligned k-ARCS(2kt+1) certificate.
BuildResult construction_00(const Certificate& arcs);

// 2l C_k-factors + (2kt-2l) C_{2kt+1}-factors of
// Cay(Z_k x Z_{2kt+1}, {+-1} x (Z∖{0})); l not in {1, 2, kt-1, kt}.
BuildResult construction_2l(int k, int t, int l);

// u C_k-factors + a 1-factor of Cay(Z_k x Z_{2u}, {0}x(Z∖{0}) ∪ {+-1}x{0})
// from a (k,1)-CF(2^u); needs 2(u-1) = 0 mod k.
BuildResult construction_2ku(const Certificate& frame);
BuildResult construction_2ku(int k, int u);

// HW(C_m[n]; m, n; alpha, n-alpha): row-table C_m-factors plus difference
// blocks for the C_n-factors. beta in {1,3} is not constructible here.
BuildResult hw_lex(int m, int n, int alpha);

// n C_{mn}-factors of C_m[n] (translates of one spanning cycle).
BuildResult lex_hamilton(int m, int n);

}  // namespace hwdesign::cayley
