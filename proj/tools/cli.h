//
// dagat - Copyright 2026 The dagat Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DAGAT_TOOLS_CLI_H_
#define DAGAT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dagat::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kNumericFailure = 3,
};

// `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace dagat::cli

#endif // DAGAT_TOOLS_CLI_H_
