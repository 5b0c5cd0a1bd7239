#pragma once

#include <string>
#include <vector>

namespace qgs::cli {

/// Parses and runs one command invocation (arguments without the program
/// name). Returns the process exit code: 0 on success, 1 on validation /
/// numerical / file errors (with a machine-readable JSON object on stderr),
/// 2 on unknown flags or commands.
int run(const std::vector<std::string>& args);

} // namespace qgs::cli
