// Copyright 2026 The gbsim Authors
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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbs/gaussian_state.hpp"
#include "gbs/hafnian.hpp"
#include "gbs/sampler.hpp"

namespace gbs {

/// A state as stored on disk. `provenance` is carried through untouched.
struct StateFile {
    GaussianState state;
    std::optional<nlohmann::json> provenance;
};

/// Canonical text: {"m", "hbar", "V" (flat row-major), "R", ["provenance"]}
/// with two-space indentation and a trailing newline. Parsing and writing
/// the canonical form again gives the same bytes.
std::string state_to_json(const GaussianState &state, const std::optional<nlohmann::json> &provenance = {});
StateFile state_from_json(const std::string &text);

StateFile read_state_file(const std::filesystem::path &path);
void write_state_file(const std::filesystem::path &path, const GaussianState &state,
                      const std::optional<nlohmann::json> &provenance = {});

/// Complex matrices are {"n": n, "matrix": [[[re, im], ...], ...]} with an
/// optional "diagonal": [[re, im], ...] that overrides the diagonal.
nlohmann::json complex_matrix_to_json(const CMatrix &matrix);
CMatrix complex_matrix_from_json(const nlohmann::json &doc);

/// Loads a matrix file and rejects it unless symmetric within 1e-10.
CMatrix read_symmetric_matrix_file(const std::filesystem::path &path);
CMatrix read_matrix_file(const std::filesystem::path &path);
void write_matrix_file(const std::filesystem::path &path, const CMatrix &matrix);

std::string read_text_file(const std::filesystem::path &path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

/// Header line "# gbs-samples <compact json config>" followed by one line of
/// space-separated counts per sample.
std::string format_samples(const nlohmann::json &config, const std::vector<Sample> &samples);

/// RFC-4180-free CSV: fields are written verbatim, one row per line.
std::string format_csv(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace gbs
