#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esboot::cli {

/// Entry point behind `esboot`. Returns the process exit code; failures are
/// reported on `err` as one JSON object {"error": {"kind", "message"}}.
/// Progress lines go to `log`.
int run(const std::vector<std::string>& args, std::ostream& log, std::ostream& err);

}  // namespace esboot::cli
