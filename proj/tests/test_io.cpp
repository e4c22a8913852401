#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "hwdesign/arcs.hpp"
#include "hwdesign/compose.hpp"
#include "hwdesign/io.hpp"
#include "hwdesign/verify.hpp"

using namespace hwdesign;

static void roundtrip(const Certificate& cert) {
  std::string text = io::serialize(cert);
  Certificate back = io::parse(text);
  CHECK(back.host == cert.host);
  CHECK(back.profile == cert.profile);
  CHECK(check_certificate(back).valid);
  // serialization is stable on canonicalized certificates
  CHECK(io::serialize(back) == text);
}

TEST_CASE("round trip across host kinds") {
  roundtrip(compose::fixture("L4.6"));                       // complete, moduli
  roundtrip(compose::fixture("L4.1"));                       // multipartite + labels
  roundtrip(compose::fixture("L4.2"));                       // lex cycle
  auto arcs9 = arcs::build_arcs(9, 1);                       // infinity + missing
  REQUIRE(arcs9.ok());
  roundtrip(*arcs9.cert);
}

TEST_CASE("provenance survives the round trip") {
  Certificate cert = compose::fixture("L4.3");
  Certificate back = io::parse(io::serialize(cert));
  CHECK(back.provenance.name == "fixture");
  REQUIRE_FALSE(back.provenance.params.empty());
  CHECK(back.provenance.params[0].second == "L4.3");
}

TEST_CASE("truncated file is a parse error") {
  std::string text = io::serialize(compose::fixture("L4.6"));
  std::string cut = text.substr(0, text.size() / 2);
  CHECK_THROWS_WITH_AS(io::parse(cut), doctest::Contains("line"), DesignError);
  try {
    io::parse(cut);
  } catch (const DesignError& e) {
    CHECK(e.code() == "PARSE_ERROR");
  }
}

TEST_CASE("missing version header is rejected") {
  std::string text = io::serialize(compose::fixture("L4.6"));
  CHECK_THROWS_AS(io::parse(text.substr(text.find('\n') + 1)), DesignError);
}

TEST_CASE("unknown fields are rejected") {
  std::string text = io::serialize(compose::fixture("L4.6"));
  auto pos = text.find("\nclass ");
  REQUIRE(pos != std::string::npos);
  std::string bad = text.substr(0, pos + 1) + "frobnicate 12\n" + text.substr(pos + 1);
  CHECK_THROWS_AS(io::parse(bad), DesignError);
}

TEST_CASE("save and load files") {
  Certificate cert = compose::fixture("L4.2");
  std::string path = "/tmp/hwdesign_io_test.cert";
  io::save_file(path, cert);
  Certificate back = io::load_file(path);
  CHECK(check_certificate(back).valid);
  CHECK(back.profile == cert.profile);
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::load_file(path), DesignError);
}
