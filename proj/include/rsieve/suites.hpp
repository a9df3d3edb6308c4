#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsieve/analytics.hpp"
#include "rsieve/report.hpp"

namespace rsieve {

/// Inputs shared by the verification suites; unset fields take per-suite defaults.
struct SuiteParams {
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> lo;
  std::optional<std::uint64_t> hi;
  std::optional<std::uint64_t> stride;
  SurveyOptions survey;
};

struct SuiteInfo {
  std::string id;
  std::string claim;
};

const std::vector<SuiteInfo>& suite_list();

/// Runs one suite. Fail records carry a witness; report-only records never fail.
/// Unknown ids throw ValidationError.
VerificationRecord run_suite(const std::string& id, const SuiteParams& params);

}  // namespace rsieve
