// Copyright 2026 The qert Authors
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

#include "qert/json_io.hpp"

namespace qert::json_io {

using nlohmann::json;

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error("matrix JSON: entries must be [re, im] pairs of numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const CMatrix& m) {
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            data.push_back(complex_to_json(m(i, j)));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error("matrix JSON: expected an object with rows, cols and data");
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
        throw Error("matrix JSON: rows and cols must be nonnegative integers");
    const auto rows = j["rows"].get<Index>();
    const auto cols = j["cols"].get<Index>();
    const json& data = j["data"];
    if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols)
        throw Error("matrix JSON: data must hold rows * cols entries");
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index c = 0; c < cols; ++c)
            m(i, c) = complex_from_json(data[static_cast<std::size_t>(i * cols + c)]);
    return m;
}

json ert_to_json(const ErtValue& v) {
    if (v.is_finite())
        return v.value();
    return "infinity";
}

}  // namespace qert::json_io
