#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace gev {

// sequences, lambert, assoc-bracket, stft-roundtrip, classify-synthetic,
// wavefront-corpus.
const std::vector<std::string>& suite_names();

// {"name", "passed", "metrics"}. Contains no timings, so repeated runs give
// identical JSON. Throws ConfigError for an unknown name.
nlohmann::json run_suite(const std::string& name);

// "all" or a single suite: {"suites": [...], "passed"}.
nlohmann::json run_scorecard(const std::string& suite);

}  // namespace gev
