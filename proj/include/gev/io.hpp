#pragma once

#include <string>
#include <vector>

#include "gev/stft.hpp"

namespace gev {

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

// Reads `t,re[,im]` rows, with an optional header line. Times must be uniformly
// spaced to 1e-9 of the step. Throws ConfigError.
SampledSignal read_signal_csv(const std::string& path);

// CSV with the given header; each row is formatted with format_double.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

// Writes through a temporary file in the same directory and renames it over
// the target. Throws ConfigError when the file cannot be written.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace gev
