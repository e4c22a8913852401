#pragma once

#include <array>
#include <optional>

#include "hwdesign/arcs.hpp"
#include "hwdesign/result.hpp"

namespace hwdesign::search {

// Deterministic search budget: identical task + seed => identical result.
struct Budget {
  long long nodes = 5'000'000;
  int restarts = 6;
  std::uint64_t seed = 0x5eed5eedULL;
};

// ---- fixture cache -------------------------------------------------------
// Directory from $DESIGN_FIXTURE_DIR, falling back to the compiled-in
// default. Keys are canonical task descriptions; files are certificates.
std::string cache_dir();
std::optional<Certificate> cache_lookup(const std::string& key);
void cache_store(const std::string& key, const Certificate& cert);

// ---- generic factorization search ---------------------------------------
// Partitions the given edge multiset on vertices 0..n-1 into 2-factors, one
// per entry of `plan`; factor f consists of cycles of length plan[f] covering
// every vertex. Returns factors as cycles of vertex indices.
using IndexCycle = std::vector<int>;
using IndexFactor = std::vector<IndexCycle>;
std::optional<std::vector<IndexFactor>> factor_cycles(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<int>& plan, const Budget& budget = {});

// Convenience wrapper over a host graph; returns verified uniform 2-factor
// classes (cycle length plan[f] for class f).
std::optional<std::vector<FactorClass>> resolvable_cycles(
    const HostGraph& host, const std::vector<int>& plan, const Budget& budget = {});

// Symmetric variant: searches one base 2-factor (cycles of length L) holding
// exactly one edge from each orbit of `perm`, so that the translates of the
// base under perm tile the edge set. perm must be an automorphism of the
// edge multiset; its order gives the number of factors. Much faster than the
// generic search when such a symmetry exists.
std::optional<std::vector<IndexFactor>> orbit_cycles(
    int n, const std::vector<std::array<int, 2>>& edges,
    const std::vector<int>& perm, int L, const Budget& budget = {});

// ---- specialized searches ------------------------------------------------

// Searches a starter 2-factor satisfying the almost resolvable expansion
// conditions (variant 'A': order 2k+1, any d with gcd(d,k)=1;
// variant 'B': order 6k+1, d=3). Intended for small odd k.
std::optional<arcs::Starter> search_starter(int k, char variant,
                                            const Budget& budget = {});

// (k,1)-cycle frame of type g^u on parts {i} x Z_g. Checks necessary
// conditions, consults the cache, then searches bases developed by
// (-, +2 mod g). Caches successes.
BuildResult frame(int k, int g, int u, const Budget& budget = {});

// Decomposition of the circulant graph Cay(Z_n, {+-d1, +-d2}) into two
// Hamilton cycles, returned as vertex sequences.
std::optional<std::pair<std::vector<int>, std::vector<int>>> hamilton_pair_circulant(
    int n, int d1, int d2, const Budget& budget = {});

// |S| x m array over Z_n whose columns each carry the multiset S and whose
// rows sum to 0 mod n. Row r of the result lists the m increments.
std::optional<std::vector<std::vector<int>>> find_row_array(
    std::vector<int> S, int m, int n, const Budget& budget = {});

}  // namespace hwdesign::search
