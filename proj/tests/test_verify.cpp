#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "hwdesign/arcs.hpp"
#include "hwdesign/compose.hpp"
#include "hwdesign/verify.hpp"

using namespace hwdesign;

static Certificate hamilton9() {
  auto r = compose::classical(
      {compose::ClassicalRequest::Kind::HamiltonComplete, 9, 0, 0, 0, 0, 0});
  REQUIRE(r.ok());
  return *r.cert;
}

TEST_CASE("a correct certificate verifies") {
  auto report = check_certificate(hamilton9());
  CHECK(report.valid);
  CHECK(report.violations.empty());
  REQUIRE(report.measured.size() == 1);
  CHECK(report.measured[0].length == 9);
  CHECK(report.measured[0].count == 4);
}

TEST_CASE("swapping two vertices inside a class is caught with a witness") {
  Certificate cert = hamilton9();
  auto& vs = cert.classes[0].cycles[0].vertices;
  std::swap(vs[1], vs[3]);
  auto report = check_certificate(cert);
  CHECK_FALSE(report.valid);
  bool has_cover_violation = false;
  for (const auto& viol : report.violations)
    if (viol.code == "DOUBLE_COVERED_EDGE" || viol.code == "UNCOVERED_EDGE")
      has_cover_violation = true;
  CHECK(has_cover_violation);
  CHECK_FALSE(report.violations[0].witness.empty());
}

TEST_CASE("a tampered profile block is caught") {
  Certificate cert = hamilton9();
  cert.profile[0].count = 5;
  CHECK_FALSE(check_certificate(cert).valid);
}

TEST_CASE("dropping a class leaves uncovered edges") {
  Certificate cert = hamilton9();
  cert.classes.pop_back();
  cert.profile = measure_profile(cert.classes);
  auto report = check_certificate(cert);
  CHECK_FALSE(report.valid);
}

TEST_CASE("difference list counts ordered element differences per level pair") {
  // vertices are (element, level); one triangle at level 0, one cross edge
  auto V = [](int x, int j) { return Vertex::residue({x, j}); };
  FactorClass f;
  f.kind = FactorKind::TwoFactorUniform;
  f.length = 4;
  f.cycles = {CycleSeq({V(0, 0), V(1, 0), V(3, 0), V(2, 1)})};
  // level-0 internal edges (0,1) and (1,3): both directions recorded
  auto d00 = difference_list(f, 0, 0, 5);
  std::sort(d00.begin(), d00.end());
  CHECK(d00 == std::vector<int>{1, 2, 3, 4});
  // cross edges 3->2 and 2->0 read from level 0 to level 1
  auto d01 = difference_list(f, 0, 1, 5);
  std::sort(d01.begin(), d01.end());
  CHECK(d01 == std::vector<int>{1, 3});
}

TEST_CASE("starter conditions accept the closed-form starters") {
  for (int k : {9, 11, 13}) {
    auto st = arcs::starter_2k1(k);
    std::vector<FactorClass> fs;
    FactorClass f;
    f.kind = FactorKind::TwoFactorUniform;
    f.length = k;
    f.cycles = st.cycles;
    fs.push_back(f);
    auto chk = check_starter_conditions(fs, st.variant, st.k, st.d,
                                        Vertex::residue({0, 1}));
    CHECK(chk.ok);
  }
}

TEST_CASE("alignment holds on a built almost resolvable system") {
  auto r = arcs::build_arcs(9, 1);
  REQUIRE(r.ok());
  std::string why;
  CHECK(check_alignment(*r.cert, &why));

  // swapping missing vertices of two classes breaks alignment
  Certificate bad = *r.cert;
  int first = -1;
  for (size_t i = 0; i < bad.classes.size(); ++i)
    if (bad.classes[i].kind == FactorKind::AlmostParallel) {
      if (first < 0) {
        first = static_cast<int>(i);
      } else {
        bad.classes[first].missing = bad.classes[i].missing;
        break;
      }
    }
  CHECK_FALSE(check_alignment(bad, &why));
  CHECK_FALSE(why.empty());
}
