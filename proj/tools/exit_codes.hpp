#pragma once

namespace harvest::cli {

// Process exit codes of the harvest tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,         // bad command line
  kConfig = 2,        // invalid configuration, ordering or domain violation
  kNumerical = 3,     // quadrature did not converge, UV divergence, invalid state
  kVerification = 4,  // a verification check failed
  kIo = 5,            // output could not be written
};

}  // namespace harvest::cli
