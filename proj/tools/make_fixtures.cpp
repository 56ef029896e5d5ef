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

// Regenerates the synthetic benchmark fixtures under a target directory.
// The checked-in copies under data/synthetic were produced with seed 1729.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "pearlkit/synthdata.h"

int main(int argc, char** argv) {
  std::string root = "data/synthetic";
  uint64_t seed = 1729;
  if (argc > 1) root = argv[1];
  if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);
  if (argc > 3 || root == "--help" || root == "-h") {
    std::cerr << "usage: make_fixtures [output_dir] [seed]\n";
    return 2;
  }
  pearlkit::write_fixture_tree(root, seed);
  std::cout << "wrote fixtures to " << root << " (seed " << seed << ")\n";
  return 0;
}
