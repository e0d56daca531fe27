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

#include "lyapsim/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lyapsim/errors.hpp"

namespace lyapsim {

namespace {

using nlohmann::json;

// Extracts an N-row matrix-of-reals field.
Eigen::MatrixXd parse_real_part(const json& part, Eigen::Index rows, Eigen::Index cols,
                                const char* name) {
    if (!part.is_array() || static_cast<Eigen::Index>(part.size()) != rows) {
        std::ostringstream msg;
        msg << "matrix field \"" << name << "\" must be an array of " << rows << " rows";
        throw ParseError(msg.str());
    }
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = part[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            std::ostringstream msg;
            msg << "matrix field \"" << name << "\" row " << i << " must have " << cols
                << " entries";
            throw ParseError(msg.str());
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& entry = row[static_cast<std::size_t>(j)];
            if (!entry.is_number()) {
                std::ostringstream msg;
                msg << "matrix field \"" << name << "\" entry (" << i << ", " << j
                    << ") is not a number";
                throw ParseError(msg.str());
            }
            out(i, j) = entry.get<double>();
        }
    }
    return out;
}

} // namespace

ComplexMatrix parse_matrix_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("matrix document must be a JSON object");
    if (!doc.contains("rows") || !doc.contains("cols") || !doc.contains("re"))
        throw ParseError("matrix document requires \"rows\", \"cols\" and \"re\" fields");
    if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer())
        throw ParseError("\"rows\" and \"cols\" must be integers");

    const Eigen::Index rows = doc["rows"].get<Eigen::Index>();
    const Eigen::Index cols = doc["cols"].get<Eigen::Index>();
    if (rows <= 0 || cols <= 0) throw ParseError("\"rows\" and \"cols\" must be positive");

    const Eigen::MatrixXd re = parse_real_part(doc["re"], rows, cols, "re");
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
    if (doc.contains("im")) im = parse_real_part(doc["im"], rows, cols, "im");

    ComplexMatrix out(rows, cols);
    out.real() = re;
    out.imag() = im;
    if (!out.allFinite()) throw ParseError("matrix entries must be finite");
    return out;
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream stream(path);
    if (!stream) throw ParseError("cannot open matrix file: " + path);
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    try {
        return parse_matrix_json(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string matrix_to_json(const ComplexMatrix& m) {
    nlohmann::ordered_json doc;
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json re_row = nlohmann::ordered_json::array();
        nlohmann::ordered_json im_row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    doc["re"] = re;
    doc["im"] = im;
    return doc.dump(2);
}

} // namespace lyapsim
