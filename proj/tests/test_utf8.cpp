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

#include <string>
#include <vector>

#include <doctest.h>

#include "pearlkit/errors.h"
#include "pearlkit/utf8.h"

using namespace pearlkit;

TEST_CASE("ascii round trip") {
  std::string s = "hello world";
  std::vector<uint32_t> cps = utf8_decode(s);
  CHECK(cps.size() == 11);
  CHECK(cps[0] == 'h');
  CHECK(utf8_encode(cps) == s);
}

TEST_CASE("multibyte round trip") {
  // 2, 3 and 4 byte sequences: é U+00E9, ☃ U+2603, 😀 U+1F600.
  std::string s = "caf\xc3\xa9 \xe2\x98\x83 \xf0\x9f\x98\x80";
  std::vector<uint32_t> cps = utf8_decode(s);
  CHECK(cps.size() == 8);
  CHECK(cps[3] == 0xE9);
  CHECK(cps[5] == 0x2603);
  CHECK(cps[7] == 0x1F600);
  CHECK(utf8_encode(cps) == s);
  CHECK(utf8_length(s) == 8);
}

TEST_CASE("boundary code points survive a round trip") {
  std::vector<uint32_t> cps = {0x7F, 0x80, 0x7FF, 0x800, 0xFFFF, 0x10000,
                               0x10FFFF};
  CHECK(utf8_decode(utf8_encode(cps)) == cps);
}

TEST_CASE("invalid sequences are rejected") {
  // Overlong encoding of '/'.
  CHECK_THROWS_AS(utf8_decode("\xc0\xaf"), FormatError);
  // Lone continuation byte.
  CHECK_THROWS_AS(utf8_decode("\x80"), FormatError);
  // Truncated 3-byte sequence.
  CHECK_THROWS_AS(utf8_decode("\xe2\x98"), FormatError);
  // CESU-style surrogate half U+D800.
  CHECK_THROWS_AS(utf8_decode("\xed\xa0\x80"), FormatError);
  // Code point above U+10FFFF.
  CHECK_THROWS_AS(utf8_decode("\xf4\x90\x80\x80"), FormatError);
}

TEST_CASE("split_whitespace handles runs and edges") {
  CHECK(split_whitespace("a b  c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_whitespace("  leading") == std::vector<std::string>{"leading"});
  CHECK(split_whitespace("trailing  ") ==
        std::vector<std::string>{"trailing"});
  CHECK(split_whitespace("\t tabs\tand\nnewlines \r") ==
        std::vector<std::string>{"tabs", "and", "newlines"});
  CHECK(split_whitespace("").empty());
  CHECK(split_whitespace("   ").empty());
}

TEST_CASE("canonicalize_whitespace collapses separators") {
  CHECK(canonicalize_whitespace("  new   york \t city ") == "new york city");
  CHECK(canonicalize_whitespace("single") == "single");
  CHECK(canonicalize_whitespace("") == "");
}

TEST_CASE("join_tokens is the inverse of a clean split") {
  std::vector<std::string> tokens = {"a", "bb", "ccc"};
  std::string joined = join_tokens(tokens);
  CHECK(joined == "a bb ccc");
  CHECK(split_whitespace(joined) == tokens);
}
