// Copyright 2025 The lyapsim authors
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

#include <string>

#include "lyapsim/linalg.hpp"

namespace lyapsim {

// Matrix file format: a JSON object
//   {"rows": N, "cols": N, "re": [[...], ...], "im": [[...], ...]}
// with row-major numeric entries; "im" is optional and defaults to zeros.

// Parses a matrix from JSON text.  Throws ParseError on malformed documents
// or dimension mismatches.
ComplexMatrix parse_matrix_json(const std::string& text);

// Reads a matrix from a JSON file.  Throws ParseError when the file is
// missing or malformed.
ComplexMatrix read_matrix_file(const std::string& path);

// Serializes a matrix to the same JSON format ("im" always present).
std::string matrix_to_json(const ComplexMatrix& m);

} // namespace lyapsim
