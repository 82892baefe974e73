// Copyright 2026 The qkin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// JSON interchange. Matrices are {rows, cols, re: [...], im: [...]} in
/// row-major order. Parse failures throw ParseError.

#ifndef QKIN_JSON_IO_H
#define QKIN_JSON_IO_H

#include <string>

#include "json.hpp"
#include "qkin/conditionalization.h"
#include "qkin/decoherence.h"
#include "qkin/event_space.h"
#include "qkin/infoloss.h"
#include "qkin/linalg.h"

namespace qkin {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j);

Json state_to_json(const StateVector &psi);
StateVector state_from_json(const Json &j);

Json pvm_to_json(const PVM &pvm);
PVM pvm_from_json(const Json &j);

Json table_to_json(const ProbabilityTable &table);
ProbabilityTable table_from_json(const Json &j);

Json pipeline_to_json(const PipelineReport &report);
Json no_signaling_to_json(const NoSignalingReport &report);

/// {gamma_re, gamma_im, couplings}.
EnvironmentSpec environment_from_json(const Json &j);
Json environment_to_json(const EnvironmentSpec &env);

/// Environment fields plus {c_re, c_im, s_vectors: [{re, im}, ...]}.
TriDecomposedState tri_state_from_json(const Json &j);
Json tri_state_to_json(const TriDecomposedState &state);

/// Strict numeric accessors used by the parsers above and by the demos.
double json_number(const Json &j, const std::string &where);
std::vector<double> json_number_array(const Json &j, const std::string &where);
/// Accepts signed or unsigned JSON integers that are >= 0.
std::uint64_t json_unsigned(const Json &j, const std::string &where);

/// Two-space indented dump with a trailing newline.
std::string dump_json(const Json &j);

}  // namespace qkin

#endif
