// Copyright 2026 The Pearlkit Authors
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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pearlkit {

// Decodes UTF-8 into codepoints. Invalid byte sequences raise FormatError;
// phrase data comes from external files, so garbage must be caught at the
// boundary instead of silently corrupting edit distances.
std::vector<uint32_t> utf8_decode(std::string_view s);

std::string utf8_encode(const std::vector<uint32_t>& cps);
void utf8_append(std::string& out, uint32_t cp);

size_t utf8_length(std::string_view s);

// Splits on runs of ASCII whitespace (space, tab, CR, LF, FF, VT).
std::vector<std::string> split_whitespace(std::string_view s);

// Trims leading/trailing ASCII whitespace and collapses interior runs to a
// single space. Surfaces are canonicalized once at parse time so downstream
// joins and comparisons never see stray tabs or doubled spaces.
std::string canonicalize_whitespace(std::string_view s);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace pearlkit
