#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace ctbp {

// Cross-module oracle suite: recomputes the same quantities along independent
// routes (closed form vs quadrature vs product formula vs simulation) and
// reports every residual against its declared tolerance.

struct OracleCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<OracleCheck> checks;
  bool all_pass() const;
};

// Runs every check applicable to `spec`.  Throws RegimeError when the spec
// admits no growth rate (explosive or subcritical), since every comparison
// is anchored on the Malthusian parameter.
ValidationReport validate_spec(const ProcessSpec& spec, std::uint64_t seed,
                               std::size_t kmax);

std::string report_json(const ValidationReport& report);

}  // namespace ctbp
