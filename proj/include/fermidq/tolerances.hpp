#pragma once

#include <cstdlib>
#include <string>

#include "fermidq/error.hpp"

namespace fermidq {

struct Tolerances {
  /// Relative to the spectral radius (floored at 1).
  double cluster = 1e-9;
  double idempotency = 1e-9;
  double commutator = 1e-10;
  /// Body-matrix rank test for constraint classification.
  double rank = 1e-10;

  /// FERMIDQ_TOL, when set, replaces the cluster and idempotency tolerances.
  static Tolerances from_environment() {
    Tolerances t;
    if (const char* env = std::getenv("FERMIDQ_TOL"); env && *env) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0' || !(v > 0.0)) {
        throw DomainError(std::string("FERMIDQ_TOL must be a positive number, got '") + env + "'");
      }
      t.cluster = v;
      t.idempotency = v;
    }
    return t;
  }
};

}  // namespace fermidq
