// Copyright 2026 The nes-lra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nes_lra/error.hpp"
#include "nes_lra/harness.hpp"

namespace nes_lra {

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view field, std::string_view what) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    Fail(ErrorCode::kInvalidInput, "malformed " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

double ParseDouble(std::string_view field, std::string_view what) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  return ParseNumber<double>(field, what);
}

std::optional<double> ParseOptional(std::string_view field, std::string_view what) {
  if (field.empty()) return std::nullopt;
  return ParseDouble(field, what);
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string FormatAggregateRow(const AggregateResult& r) {
  std::ostringstream os;
  os << r.function << ',' << r.dim << ',' << r.lambda << ',' << r.lr_mode.name() << ','
     << (r.lr_mode.adaptive() ? std::string() : FormatDouble(r.lr_mode.multiplier)) << ','
     << r.trials << ',' << FormatDouble(r.success_rate) << ','
     << (r.mean_evals_success ? FormatDouble(*r.mean_evals_success) : std::string()) << ','
     << (r.score ? FormatDouble(*r.score) : std::string()) << ',' << r.base_seed;
  return os.str();
}

AggregateResult ParseAggregateRow(std::string_view line) {
  const auto f = SplitFields(StripCr(line));
  if (f.size() != 10) {
    Fail(ErrorCode::kInvalidInput, "aggregate row needs 10 fields, got " + std::to_string(f.size()));
  }
  AggregateResult r;
  r.function = std::string(f[0]);
  ParseBenchmark(r.function);
  r.dim = ParseNumber<Eigen::Index>(f[1], "dim");
  r.lambda = ParseNumber<std::size_t>(f[2], "lambda");
  if (f[3] == "adaptive") {
    r.lr_mode = LrMode::Adaptive();
  } else if (f[3] == "fixed") {
    r.lr_mode = LrMode::Fixed(ParseDouble(f[4], "multiplier"));
  } else {
    Fail(ErrorCode::kInvalidInput, "unknown lr_mode '" + std::string(f[3]) + "'");
  }
  r.trials = ParseNumber<std::size_t>(f[5], "trials");
  r.success_rate = ParseDouble(f[6], "success_rate");
  r.mean_evals_success = ParseOptional(f[7], "mean_evals_success");
  r.score = ParseOptional(f[8], "score");
  r.base_seed = ParseNumber<std::uint64_t>(f[9], "base_seed");
  return r;
}

std::vector<AggregateResult> ReadAggregate(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line) || StripCr(line) != kAggregateHeader) {
    Fail(ErrorCode::kInvalidInput, file.string() + ": unexpected aggregate header");
  }
  std::vector<AggregateResult> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (StripCr(line).empty()) continue;
    try {
      out.push_back(ParseAggregateRow(line));
    } catch (const Error& e) {
      Fail(e.code(), file.string() + ":" + std::to_string(row) + ": " + e.what());
    }
  }
  return out;
}

std::string TraceFileName(std::string_view function, std::size_t lambda, const LrMode& mode,
                          std::uint64_t seed) {
  std::ostringstream os;
  os << "trace_" << function << '_' << lambda << '_' << mode.tag() << '_' << seed << ".csv";
  return os.str();
}

void WriteTrace(const std::filesystem::path& file, const std::vector<TraceRow>& trace) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + file.string());
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.evals << ',' << FormatDouble(r.f_best) << ',' << FormatDouble(r.eta_sigma) << ','
        << FormatDouble(r.eta_b) << ',' << FormatDouble(r.l_theta) << ',' << FormatDouble(r.gamma)
        << '\n';
  }
  out.flush();
  if (!out) Fail(ErrorCode::kIo, "write failed for " + file.string());
}

std::vector<TraceRow> ReadTrace(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + file.string());
  std::string line;
  if (!std::getline(in, line) || StripCr(line) != kTraceHeader) {
    Fail(ErrorCode::kInvalidInput, file.string() + ": unexpected trace header");
  }
  std::vector<TraceRow> out;
  while (std::getline(in, line)) {
    if (StripCr(line).empty()) continue;
    const auto f = SplitFields(StripCr(line));
    if (f.size() != 6) Fail(ErrorCode::kInvalidInput, file.string() + ": trace row needs 6 fields");
    out.push_back(TraceRow{ParseNumber<std::uint64_t>(f[0], "evals"), ParseDouble(f[1], "f_best"),
                           ParseDouble(f[2], "eta_sigma"), ParseDouble(f[3], "eta_b"),
                           ParseDouble(f[4], "l_theta"), ParseDouble(f[5], "gamma")});
  }
  return out;
}

void WriteExperiment(const std::filesystem::path& out_dir, const AggregateResult& result,
                     bool write_traces) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  {
    const auto path = out_dir / "aggregate.csv";
    std::ofstream out(path, std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
    out << kAggregateHeader << '\n' << FormatAggregateRow(result) << '\n';
    out.flush();
    if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
  }
  if (!write_traces) return;
  for (const auto& rec : result.records) {
    WriteTrace(out_dir / TraceFileName(result.function, result.lambda, result.lr_mode, rec.seed),
               rec.trace);
  }
}

}  // namespace nes_lra
