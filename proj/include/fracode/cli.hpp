#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracode {

/// Parsed command-line / config-file options.  Flags and config keys map
/// one-to-one; unknown keys are rejected by the parser.
struct RunConfig {
    std::string command;
    std::string model;
    std::string input;        // spec file for commands that read one
    std::string output;       // report / artifact path ("" = stdout)
    std::uint32_t p = 2;
    std::vector<std::int32_t> sizes;
    std::vector<std::int32_t> open_axes;
    std::vector<std::string> rule_texts;  // --f, one per original axis
    std::string rules_file;
    std::string f1_text, f2_text;
    std::string polys_text;   // comma-separated, for algrel
    std::string rule_text;    // lca rule
    std::string c0_text;      // lca initial state
    std::string kmatrix_file;
    std::size_t new_dims = 1;
    std::size_t wmax = 0;
    std::uint64_t bound = 6;
    std::size_t steps = 0;
    std::vector<std::int32_t> eta_sizes;
    bool pad = false;
    std::size_t threads = 1;
    std::string export_hx, export_hz;
};

/// Exit codes: 0 success, 2 precondition or domain error, 3 enumeration
/// budget exceeded (partial report emitted where applicable).
int run_cli(int argc, const char* const* argv);

}  // namespace fracode
