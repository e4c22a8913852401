#pragma once

#include "hwdesign/model.hpp"

namespace hwdesign {

enum class BuildStatus {
  Built,              // certificate produced and verified
  Nonexistent,        // known not to exist
  Open,               // existence unknown
  NotFound,           // should exist, but no construction available here
  MissingIngredient,  // a required sub-design could not be produced
  NecessaryFail,      // parameters violate a necessary condition
};

std::string to_string(BuildStatus s);

struct BuildResult {
  BuildStatus status = BuildStatus::NotFound;
  std::optional<Certificate> cert;
  std::string detail;
  std::vector<std::string> missing;  // MissingIngredient: what was needed

  static BuildResult built(Certificate c) {
    BuildResult r;
    r.status = BuildStatus::Built;
    r.cert = std::move(c);
    return r;
  }
  static BuildResult fail(BuildStatus s, std::string detail) {
    BuildResult r;
    r.status = s;
    r.detail = std::move(detail);
    return r;
  }
  bool ok() const { return status == BuildStatus::Built; }
};

}  // namespace hwdesign
