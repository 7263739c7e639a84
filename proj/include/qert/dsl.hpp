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

#include <stdexcept>
#include <string>
#include <string_view>

#include "qert/program.hpp"

// Textual surface language (.qw files):
//
//   file  := decl* "prog" "{" stmt "}"
//   decl  := "var" id ":" int ";"
//          | "gate" id "(" int ("," int)* ")" "=" matrix ";"
//          | "meas" id "(" int ("," int)* ")" "{" (int ":" matrix ";")+ "}" [";"]
//   stmt  := simple (";" simple)*
//   simple:= "skip"
//          | id ":=" "|0>"
//          | ids ":=" id "[" ids "]"
//          | "if" id "[" ids "]" "{" int "->" stmt ("," int "->" stmt)* [","] "}"
//          | "while" id "[" ids "]" "==" "1" "do" stmt "od"
//   matrix:= "[" "[" cx ("," cx)* "]" ("," "[" ... "]")* "]"      (row-major)
//   cx    := real | real ("+"|"-") real "i" | real "i"
//
// Whitespace is insignificant and '#' starts a line comment. H, X, I and the
// computational-basis measurement `std` need no declaration.
namespace qert::dsl {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::string message, std::string expected = {});

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
    std::string expected_;
};

ProgramUnit parse(std::string_view source);

std::string pretty_print(const Program& program, const Layout& layout);
std::string pretty_print(const ProgramUnit& unit);

// A single literal such as "0.6", "-2.5e-1+0.3i" or "1i".
Complex parse_complex_literal(std::string_view text);

// Shortest text that parses back to exactly the same double(s).
std::string format_complex(Complex z);
std::string format_matrix(const CMatrix& m);

}  // namespace qert::dsl
