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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "sampling.hpp"

namespace marglik {

// Text format shared by sample and data files: one decimal float per line,
// lines starting with '#' are comments. Written sample files carry a
// provenance comment, e.g. "# provenance=mcmc burn_in=1000 thinning=5
// acceptance_rate=0.43". Floats use 17 significant digits and round-trip
// exactly.

void write_sample_file(const std::string& path, const PosteriorSample& sample);

// Parses floats and, when present, the provenance comment; files without one
// are treated as exact iid draws. Requires >= 2 finite values.
PosteriorSample read_sample_file(const std::string& path);

// Same line format, no minimum count beyond one value and no provenance.
std::vector<double> read_values_file(const std::string& path);

void write_values_file(const std::string& path, std::span<const double> values,
                       const std::string& comment);

}  // namespace marglik
