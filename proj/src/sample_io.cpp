// Copyright 2026 the marglik authors
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

#include "sample_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace marglik {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Parses one non-comment line as a double; the whole line must be consumed.
double parse_value_line(const std::string& line, const std::string& path,
                        std::size_t line_no) {
  const char* begin = line.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // allow trailing whitespace only
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) {
    ++end;
  }
  if (end == begin || end == nullptr || *end != '\0') {
    throw error(errc::parse_error,
                path + ":" + std::to_string(line_no) + ": not a number: '" + line + "'");
  }
  if (!std::isfinite(v)) {
    throw error(errc::parse_error,
                path + ":" + std::to_string(line_no) + ": value is not finite: '" + line + "'");
  }
  return v;
}

bool is_blank(const std::string& line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') {
      return false;
    }
  }
  return true;
}

struct ParsedFile {
  std::vector<double> values;
  Provenance provenance = ExactIid{};
};

ParsedFile parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw error(errc::io_error, "cannot open '" + path + "' for reading");
  }
  ParsedFile out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      continue;
    }
    if (line[0] == '#') {
      // provenance comment written by write_sample_file
      std::istringstream ss(line.substr(1));
      std::string token;
      bool mcmc = false;
      McmcInfo info;
      while (ss >> token) {
        if (token == "provenance=mcmc") {
          mcmc = true;
        } else if (token.rfind("burn_in=", 0) == 0) {
          info.burn_in = std::strtoull(token.c_str() + 8, nullptr, 10);
        } else if (token.rfind("thinning=", 0) == 0) {
          info.thinning = std::strtoull(token.c_str() + 9, nullptr, 10);
        } else if (token.rfind("acceptance_rate=", 0) == 0) {
          info.acceptance_rate = std::strtod(token.c_str() + 16, nullptr);
        }
      }
      if (mcmc) {
        out.provenance = info;
      }
      continue;
    }
    out.values.push_back(parse_value_line(line, path, line_no));
  }
  return out;
}

}  // namespace

void write_sample_file(const std::string& path, const PosteriorSample& sample) {
  std::ofstream out(path);
  if (!out) {
    throw error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  if (const auto* info = std::get_if<McmcInfo>(&sample.provenance)) {
    out << "# provenance=mcmc burn_in=" << info->burn_in << " thinning=" << info->thinning
        << " acceptance_rate=" << format_double(info->acceptance_rate) << "\n";
  } else {
    out << "# provenance=exact_iid\n";
  }
  for (double v : sample.draws) {
    out << format_double(v) << "\n";
  }
  if (!out) {
    throw error(errc::io_error, "write to '" + path + "' failed");
  }
}

PosteriorSample read_sample_file(const std::string& path) {
  ParsedFile parsed = parse_file(path);
  if (parsed.values.size() < 2) {
    throw error(errc::sample_too_small, "'" + path + "' holds " +
                                            std::to_string(parsed.values.size()) +
                                            " draws; a posterior sample needs at least 2");
  }
  return make_posterior_sample(std::move(parsed.values), parsed.provenance);
}

std::vector<double> read_values_file(const std::string& path) {
  ParsedFile parsed = parse_file(path);
  if (parsed.values.empty()) {
    throw error(errc::empty_dataset, "'" + path + "' holds no values");
  }
  return std::move(parsed.values);
}

void write_values_file(const std::string& path, std::span<const double> values,
                       const std::string& comment) {
  std::ofstream out(path);
  if (!out) {
    throw error(errc::io_error, "cannot open '" + path + "' for writing");
  }
  if (!comment.empty()) {
    out << "# " << comment << "\n";
  }
  for (double v : values) {
    out << format_double(v) << "\n";
  }
  if (!out) {
    throw error(errc::io_error, "write to '" + path + "' failed");
  }
}

}  // namespace marglik
