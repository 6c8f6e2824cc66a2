#pragma once

// abmc <command> <spec.json> [--preset NAME] [--seed N] [--json|--text] [--bounds K]
//
// Exit codes: 0 all checks pass, 1 certified failure, 2 spec or usage error.

#include <iosfwd>
#include <string>

#include "abmc/serialize.hpp"

namespace abmc::cli {

inline constexpr const char* kVersion = "1.0.0";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// The materialized spec bundle of a preset (throws SpecError for unknown
/// names).
io::json preset(const std::string& name);

}  // namespace abmc::cli
