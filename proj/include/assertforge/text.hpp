// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace assertforge::text {

std::string trim(std::string_view s);
std::string lower(std::string_view s);

// Normalizes line endings to LF, trims the whole string, and collapses
// internal runs of spaces/tabs to a single space. Newlines are preserved.
std::string canonicalize_ws(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

// Identifier grammar shared by signals.json, the SVA frontend, and the
// Verilog frontend: [A-Za-z_][A-Za-z0-9_]*
bool is_identifier(std::string_view s);

// Whole-word, case-insensitive occurrence test. Word boundaries are any
// characters outside [A-Za-z0-9_].
bool contains_word(std::string_view haystack, std::string_view word);

// Splits an identifier on '_' into lowercase tokens ("wb_clk_i" -> wb,clk,i).
std::vector<std::string> name_tokens(std::string_view name);

// {{SLOT}} substitution for prompt and behavior templates.
std::string substitute(std::string_view tmpl,
                       const std::vector<std::pair<std::string, std::string>>& slots);

} // namespace assertforge::text
