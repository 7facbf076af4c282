#include "gev/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "gev/errors.hpp"

namespace gev {

namespace {

constexpr double kJitter = 1e-9;

bool parse_number(const std::string& text, double& out) {
  std::size_t a = text.find_first_not_of(" \t\r");
  std::size_t b = text.find_last_not_of(" \t\r");
  if (a == std::string::npos) return false;
  const char* first = text.data() + a;
  const char* last = text.data() + b + 1;
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

SampledSignal read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("io_error", "cannot open signal file '" + path + "'");
  std::vector<double> times;
  SampledSignal sig;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    std::vector<double> v(fields.size());
    bool numeric = fields.size() >= 2 && fields.size() <= 3;
    for (std::size_t i = 0; numeric && i < fields.size(); ++i) numeric = parse_number(fields[i], v[i]);
    if (!numeric) {
      if (times.empty() && line_no == 1) continue;  // header
      throw ConfigError("bad_csv", path + ":" + std::to_string(line_no) + ": expected t,re[,im]");
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) throw ConfigError("bad_csv", path + ":" + std::to_string(line_no) + ": column count changed");
    for (double x : v) {
      if (!std::isfinite(x)) throw ConfigError("bad_csv", path + ":" + std::to_string(line_no) + ": non-finite value");
    }
    times.push_back(v[0]);
    sig.samples.emplace_back(v[1], width == 3 ? v[2] : 0.0);
  }
  if (times.size() < 2) throw ConfigError("bad_csv", path + ": need at least two samples");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw ConfigError("bad_csv", path + ": times must increase");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = times.front() + static_cast<double>(i) * dt;
    if (std::fabs(times[i] - expected) > kJitter * dt) {
      throw ConfigError("bad_csv", path + ": sample times are not uniformly spaced (row " + std::to_string(i + 1) + ")");
    }
  }
  sig.dt = dt;
  sig.t0 = times.front();
  return sig;
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("io_error", "cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("io_error", "short write to '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("io_error", "cannot rename into '" + path + "'");
  }
}

}  // namespace gev
