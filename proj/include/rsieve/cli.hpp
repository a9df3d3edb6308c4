#pragma once

#include <iosfwd>

namespace rsieve {

inline constexpr const char* kToolVersion = "0.1.0";

/// Command-line entry point. Exit codes: 0 success or all-pass, 1 a witness
/// was emitted (violation or failed check), 2 usage or domain error.
///
/// Cap defaults can be overridden through RSIEVE_EXHAUSTIVE_CAP,
/// RSIEVE_ENUMERATION_CAP, RSIEVE_MATERIALIZE_CAP and RSIEVE_SEGMENT_BITS;
/// explicit flags win over the environment.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rsieve
