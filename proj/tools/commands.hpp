#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "popcov/symmat.hpp"

namespace popcov::app {

// Exit codes of the popcov tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitDisagree = 3;  // root --require-agreement: V-hat and S-hat splits differ

/// Runs the command line; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Binary PGM (P5) heatmap, min -> 0 and max -> 255, each entry drawn as a
/// cell x cell square.
void write_heatmap(const std::filesystem::path& path, const SymMat& a, int cell = 0);

}  // namespace popcov::app
