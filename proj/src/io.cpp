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

#include "gbs/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "gbs/error.hpp"

namespace gbs {

namespace fs = std::filesystem;
using ordered = nlohmann::ordered_json;

namespace {

template <typename Json>
double number_at(const Json &node, const std::string &what) {
    if (!node.is_number()) throw Error(ErrorCode::InvalidArgument, what + " must be a number");
    return node.template get<double>();
}

std::vector<double> flatten_reals(const nlohmann::json &node, const std::string &what) {
    if (!node.is_array()) throw Error(ErrorCode::InvalidArgument, what + " must be an array");
    std::vector<double> out;
    for (const auto &item : node) {
        if (item.is_array()) {
            for (const auto &inner : item) out.push_back(number_at(inner, what));
        } else {
            out.push_back(number_at(item, what));
        }
    }
    return out;
}

std::complex<double> complex_at(const nlohmann::json &node, const std::string &what) {
    if (node.is_number()) return {node.get<double>(), 0.0};
    if (!node.is_array() || node.size() != 2)
        throw Error(ErrorCode::InvalidArgument, what + " entries must be [re, im] pairs");
    return {number_at(node[0], what), number_at(node[1], what)};
}

nlohmann::json parse_json(const std::string &text, const std::string &what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::InvalidArgument, what + " is not valid JSON: " + e.what());
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string state_to_json(const GaussianState &state, const std::optional<nlohmann::json> &provenance) {
    const auto dim = state.cov().rows();
    ordered doc;
    doc["m"] = state.modes();
    doc["hbar"] = state.hbar();
    ordered v = ordered::array();
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) v.push_back(state.cov()(i, j));
    doc["V"] = std::move(v);
    ordered r = ordered::array();
    for (Eigen::Index i = 0; i < dim; ++i) r.push_back(state.means()(i));
    doc["R"] = std::move(r);
    if (provenance) doc["provenance"] = ordered::parse(provenance->dump());
    return doc.dump(2) + "\n";
}

StateFile state_from_json(const std::string &text) {
    const nlohmann::json doc = parse_json(text, "state file");
    if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "state file must be a JSON object");
    for (const char *key : {"m", "V", "R"})
        if (!doc.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("state file is missing \"") + key + "\"");
    if (!doc["m"].is_number_integer() || doc["m"].get<long long>() < 1)
        throw Error(ErrorCode::InvalidArgument, "\"m\" must be a positive integer");
    const auto m = doc["m"].get<long long>();
    const double hbar = doc.contains("hbar") ? number_at(doc["hbar"], "hbar") : kDefaultHbar;

    const std::vector<double> v = flatten_reals(doc["V"], "V");
    const std::vector<double> r = flatten_reals(doc["R"], "R");
    const auto dim = static_cast<std::size_t>(2 * m);
    if (v.size() != dim * dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "V has " + std::to_string(v.size()) + " entries, expected " + std::to_string(dim * dim));
    if (r.size() != dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "R has " + std::to_string(r.size()) + " entries, expected " + std::to_string(dim));

    RMatrix cov(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) cov(i, j) = v[i * dim + j];
    RVector means = Eigen::Map<const RVector>(r.data(), static_cast<Eigen::Index>(dim));

    StateFile out{GaussianState::make(std::move(cov), std::move(means), hbar), std::nullopt};
    if (doc.contains("provenance")) out.provenance = doc["provenance"];
    return out;
}

StateFile read_state_file(const fs::path &path) { return state_from_json(read_text_file(path)); }

void write_state_file(const fs::path &path, const GaussianState &state, const std::optional<nlohmann::json> &provenance) {
    write_file_atomic(path, state_to_json(state, provenance));
}

nlohmann::json complex_matrix_to_json(const CMatrix &matrix) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) row.push_back({matrix(i, j).real(), matrix(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return {{"n", matrix.rows()}, {"matrix", std::move(rows)}};
}

CMatrix complex_matrix_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("matrix"))
        throw Error(ErrorCode::InvalidArgument, "matrix file needs \"n\" and \"matrix\"");
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 0)
        throw Error(ErrorCode::InvalidArgument, "\"n\" must be a non-negative integer");
    const auto n = static_cast<Eigen::Index>(doc["n"].get<long long>());
    const auto &rows = doc["matrix"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "\"matrix\" must have n rows");
    CMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto &row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " must have n entries");
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = complex_at(row[static_cast<std::size_t>(j)], "matrix");
    }
    if (doc.contains("diagonal")) {
        const auto &diag = doc["diagonal"];
        if (!diag.is_array() || static_cast<Eigen::Index>(diag.size()) != n)
            throw Error(ErrorCode::DimensionMismatch, "\"diagonal\" must have n entries");
        for (Eigen::Index i = 0; i < n; ++i) out(i, i) = complex_at(diag[static_cast<std::size_t>(i)], "diagonal");
    }
    if (!out.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
    return out;
}

CMatrix read_matrix_file(const fs::path &path) {
    return complex_matrix_from_json(parse_json(read_text_file(path), "matrix file " + path.string()));
}

CMatrix read_symmetric_matrix_file(const fs::path &path) {
    CMatrix out = read_matrix_file(path);
    if (out.size() > 0) {
        const double scale = std::max(1.0, out.cwiseAbs().maxCoeff());
        if ((out - out.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw Error(ErrorCode::NotSymmetric, "matrix in " + path.string() + " is not symmetric");
    }
    return out;
}

void write_matrix_file(const fs::path &path, const CMatrix &matrix) {
    write_file_atomic(path, complex_matrix_to_json(matrix).dump(2) + "\n");
}

std::string read_text_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const fs::path &path, const std::string &content) {
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw Error(ErrorCode::InvalidArgument, "cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string format_samples(const nlohmann::json &config, const std::vector<Sample> &samples) {
    std::string out = "# gbs-samples " + config.dump() + "\n";
    for (const auto &s : samples) {
        for (std::size_t i = 0; i < s.pattern.counts().size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(s.pattern.counts()[i]);
        }
        out += '\n';
    }
    return out;
}

std::string format_csv(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows) {
    auto line = [](const std::vector<std::string> &fields) {
        std::string out;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        return out + "\n";
    };
    std::string out = line(header);
    for (const auto &row : rows) out += line(row);
    return out;
}

}  // namespace gbs
