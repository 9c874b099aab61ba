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

#include "errors.hpp"

namespace marglik {

const char* errc_name(errc code) {
  switch (code) {
    case errc::ok:
      return "OK";
    case errc::invalid_argument:
      return "E_INVALID_ARGUMENT";
    case errc::empty_dataset:
      return "E_EMPTY_DATASET";
    case errc::invalid_observation:
      return "E_INVALID_OBSERVATION";
    case errc::invalid_scale:
      return "E_INVALID_SCALE";
    case errc::sample_too_small:
      return "E_SAMPLE_TOO_SMALL";
    case errc::bad_initialization:
      return "E_BAD_INITIALIZATION";
    case errc::degenerate_sample:
      return "E_DEGENERATE_SAMPLE";
    case errc::out_of_grid_range:
      return "E_OUT_OF_GRID_RANGE";
    case errc::density_floor:
      return "E_DENSITY_FLOOR";
    case errc::empty_support:
      return "E_EMPTY_SUPPORT";
    case errc::tolerance_not_met:
      return "E_TOLERANCE_NOT_MET";
    case errc::empty_input:
      return "E_EMPTY_INPUT";
    case errc::io_error:
      return "E_IO";
    case errc::parse_error:
      return "E_PARSE";
  }
  return "E_UNKNOWN";
}

}  // namespace marglik
