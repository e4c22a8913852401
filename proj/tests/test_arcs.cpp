#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hwdesign/arcs.hpp"
#include "hwdesign/verify.hpp"

using namespace hwdesign;

static void check_arcs_shape(const Certificate& cert, int k, int t) {
  auto report = check_certificate(cert);
  CHECK(report.valid);
  int almost = 0, half = 0;
  for (const auto& f : cert.classes) {
    if (f.kind == FactorKind::AlmostParallel) ++almost;
    if (f.kind == FactorKind::HalfParallel) ++half;
    CHECK(f.length == k);
  }
  CHECK(almost == k * t);
  CHECK(half == 1);
  std::string why;
  CHECK(check_alignment(cert, &why));
}

TEST_CASE("closed-form starter expands to an order-19 system") {
  auto st = arcs::starter_2k1(9);
  CHECK(st.variant == 'A');
  CHECK(st.cycles.size() == 2);
  Certificate cert = arcs::expand_starter(st);
  check_arcs_shape(cert, 9, 1);
}

TEST_CASE("starter difference conditions hold for a sample of k") {
  for (int k : {9, 15, 21, 27, 33, 49}) {
    auto st = arcs::starter_2k1(k);
    std::vector<FactorClass> fs(1);
    fs[0].kind = FactorKind::TwoFactorUniform;
    fs[0].length = k;
    fs[0].cycles = st.cycles;
    auto chk = check_starter_conditions(fs, st.variant, st.k, st.d,
                                        Vertex::residue({0, 1}));
    INFO("k=", k);
    CHECK(chk.ok);
  }
}

TEST_CASE("order-6k+1 starters cover the template branches") {
  // specials, the two mod-12 residues, and the mod-8 cases
  for (int k : {9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33}) {
    auto st = arcs::starter_6k1(k);
    CHECK(st.variant == 'B');
    CHECK(st.cycles.size() == 6);
    std::vector<FactorClass> fs(1);
    fs[0].kind = FactorKind::TwoFactorUniform;
    fs[0].length = k;
    fs[0].cycles = st.cycles;
    auto chk = check_starter_conditions(fs, st.variant, st.k, st.d,
                                        Vertex::residue({0, 1}));
    INFO("k=", k);
    CHECK(chk.ok);
  }
}

TEST_CASE("build_arcs produces verified systems for t=1 and t=3") {
  auto r1 = arcs::build_arcs(11, 1);
  REQUIRE(r1.ok());
  check_arcs_shape(*r1.cert, 11, 1);
  auto r3 = arcs::build_arcs(9, 3);
  REQUIRE(r3.ok());
  check_arcs_shape(*r3.cert, 9, 3);
}

TEST_CASE("small-k exceptions are reported, not built") {
  auto r = arcs::build_arcs(3, 1);
  CHECK(r.status == BuildStatus::Nonexistent);
  auto s = arcs::arcs_status(3, 1);
  CHECK(s.status == arcs::ArcsStatus::Nonexistent);
}

TEST_CASE("status table agrees with the published ranges") {
  CHECK(arcs::arcs_status(9, 1).status == arcs::ArcsStatus::Exists);
  CHECK(arcs::arcs_status(49, 1).status == arcs::ArcsStatus::Exists);
  CHECK(arcs::arcs_status(9, 3).status == arcs::ArcsStatus::Exists);
  CHECK(arcs::arcs_status(3, 2).status == arcs::ArcsStatus::Nonexistent);
}
