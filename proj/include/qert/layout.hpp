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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qert {

struct QuantumVariable {
    std::string name;
    std::size_t dim = 1;

    friend bool operator==(const QuantumVariable&, const QuantumVariable&) = default;
};

// Ordered tensor layout H = H_{v0} (x) H_{v1} (x) ... ; the first variable is the
// most significant digit of a basis index.
class Layout {
public:
    Layout() = default;
    explicit Layout(std::vector<QuantumVariable> vars);

    const std::vector<QuantumVariable>& variables() const { return vars_; }
    std::size_t size() const { return vars_.size(); }
    std::size_t total_dim() const { return total_dim_; }

    std::optional<std::size_t> position(std::string_view name) const;
    const QuantumVariable* find(std::string_view name) const;

    // Index of digit `pos` in the flattened basis index.
    std::size_t stride(std::size_t pos) const { return strides_[pos]; }

    friend bool operator==(const Layout& a, const Layout& b) { return a.vars_ == b.vars_; }

private:
    std::vector<QuantumVariable> vars_;
    std::vector<std::size_t> strides_;
    std::size_t total_dim_ = 1;
};

// Product of the dimensions of `vars`.
std::size_t product_dim(std::span<const QuantumVariable> vars);

}  // namespace qert
