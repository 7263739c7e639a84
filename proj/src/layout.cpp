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

#include "qert/layout.hpp"

#include <unordered_set>

#include "qert/common.hpp"

namespace qert {

Layout::Layout(std::vector<QuantumVariable> vars) : vars_(std::move(vars)) {
    std::unordered_set<std::string> seen;
    for (const auto& v : vars_) {
        if (v.dim == 0)
            throw Error("variable '" + v.name + "' has dimension 0");
        if (!seen.insert(v.name).second)
            throw Error("duplicate variable '" + v.name + "'");
    }
    strides_.assign(vars_.size(), 1);
    total_dim_ = 1;
    for (std::size_t i = vars_.size(); i-- > 0;) {
        strides_[i] = total_dim_;
        total_dim_ *= vars_[i].dim;
    }
}

std::optional<std::size_t> Layout::position(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name)
            return i;
    return std::nullopt;
}

const QuantumVariable* Layout::find(std::string_view name) const {
    auto pos = position(name);
    return pos ? &vars_[*pos] : nullptr;
}

std::size_t product_dim(std::span<const QuantumVariable> vars) {
    std::size_t d = 1;
    for (const auto& v : vars)
        d *= v.dim;
    return d;
}

}  // namespace qert
