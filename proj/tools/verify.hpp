#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace harvest::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured deviation or quantity
  double tolerance = 0.0;  // pass threshold on value
  std::string detail;
};

struct VerifyOptions {
  // Injected sign on Theta in the printed lattices (mutation test only).
  double theta_sign = 1.0;
  std::uint64_t seed = 20190611;
};

// Oracle, identity and cross-engine battery. Never throws: a check that
// raises is reported as failed with the exception text.
std::vector<CheckResult> run_verification(const VerifyOptions& opt);

}  // namespace harvest::verify
