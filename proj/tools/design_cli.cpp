#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hwdesign/arcs.hpp"
#include "hwdesign/cayley.hpp"
#include "hwdesign/compose.hpp"
#include "hwdesign/io.hpp"
#include "hwdesign/search.hpp"
#include "hwdesign/verify.hpp"

using namespace hwdesign;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitClassified = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

int emit(const BuildResult& r, const std::string& out_path) {
  if (!r.ok()) {
    std::cout << to_string(r.status);
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
    for (const auto& m : r.missing) std::cout << "  needs: " << m << "\n";
    return kExitClassified;
  }
  std::string text = io::serialize(*r.cert);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitInternal;
    }
    f << text;
  }
  return kExitOk;
}

int cmd_verify(const std::string& path) {
  Certificate cert;
  try {
    cert = io::load_file(path);
  } catch (const DesignError& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
  auto report = check_certificate(cert);
  std::cout << (report.valid ? "VALID" : "INVALID") << " profile "
            << to_string(report.measured) << "\n";
  if (report.valid) return kExitOk;
  for (const auto& viol : report.violations)
    std::cout << viol.code << " class=" << viol.class_index << " "
              << viol.witness << "\n";
  if (report.suppressed > 0)
    std::cout << "(+" << report.suppressed << " more violations)\n";
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct and verify cycle-factorization certificates"};
  app.require_subcommand(1);

  std::string out_path;
  long long v = 0, alpha = 0, beta = 0;
  int k = 0, t = 1, m = 0, n = 0, g = 0, u = 0, l = 0;
  std::string name, construction, path;

  auto* build = app.add_subcommand("build", "construct a design certificate");
  build->require_subcommand(1);

  auto* b_arcs = build->add_subcommand("arcs", "almost resolvable cycle system");
  b_arcs->add_option("--k", k, "cycle length")->required();
  b_arcs->add_option("--t", t, "order parameter, n = 2kt+1")->required();
  b_arcs->add_option("-o,--out", out_path, "output file (default stdout)");

  auto* b_hw = build->add_subcommand("hw", "two-cycle-length 2-factorization");
  b_hw->add_option("--v", v)->required();
  b_hw->add_option("--m", m)->required();
  b_hw->add_option("--n", n)->required();
  b_hw->add_option("--alpha", alpha)->required();
  b_hw->add_option("--beta", beta)->required();
  b_hw->add_option("-o,--out", out_path);

  auto* b_cay = build->add_subcommand("cayley", "expansion constructions");
  b_cay->add_option("--construction", construction, "00, 2l or 2ku")->required();
  b_cay->add_option("--k", k);
  b_cay->add_option("--t", t);
  b_cay->add_option("--l", l);
  b_cay->add_option("--u", u);
  b_cay->add_option("-o,--out", out_path);

  auto* b_fix = build->add_subcommand("fixture", "embedded direct construction");
  b_fix->add_option("--name", name)->required();
  b_fix->add_option("-o,--out", out_path);

  auto* b_frame = build->add_subcommand("frame", "holey cycle frame");
  b_frame->add_option("--k", k)->required();
  b_frame->add_option("--g", g)->required();
  b_frame->add_option("--u", u)->required();
  b_frame->add_option("-o,--out", out_path);

  auto* ver = app.add_subcommand("verify", "check a certificate file");
  ver->add_option("path", path, "certificate file")->required();

  auto* stat = app.add_subcommand("status", "classify a parameter tuple");
  stat->add_option("--v", v)->required();
  stat->add_option("--m", m)->required();
  stat->add_option("--n", n)->required();
  stat->add_option("--alpha", alpha);
  stat->add_option("--beta", beta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ver->parsed()) return cmd_verify(path);
    if (stat->parsed()) {
      std::cout << compose::to_string(compose::hwp_status(v, m, n, alpha, beta))
                << "\n";
      return kExitOk;
    }
    if (b_arcs->parsed()) return emit(arcs::build_arcs(k, t), out_path);
    if (b_hw->parsed()) return emit(compose::build_hw(v, m, n, alpha, beta), out_path);
    if (b_fix->parsed())
      return emit(BuildResult::built(compose::fixture(name)), out_path);
    if (b_frame->parsed()) return emit(search::frame(k, g, u), out_path);
    if (b_cay->parsed()) {
      if (construction == "00") {
        auto base = arcs::build_arcs(k, t);
        if (!base.ok()) return emit(base, out_path);
        return emit(cayley::construction_00(*base.cert), out_path);
      }
      if (construction == "2l") return emit(cayley::construction_2l(k, t, l), out_path);
      if (construction == "2ku") return emit(cayley::construction_2ku(k, u), out_path);
      std::cerr << "unknown construction: " << construction << "\n";
      return kExitUsage;
    }
  } catch (const DesignError& e) {
    std::cerr << e.what() << "\n";
    return e.code() == "REJECT_PARAMS" ? kExitUsage : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
