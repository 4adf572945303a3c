// Copyright 2026 The AoT Harness Authors
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

// Two-level logic minimization for Karnaugh-map IRs (Quine-McCluskey with
// an exact cover search).

#ifndef AOT_KMAP_H_
#define AOT_KMAP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aot/ir.h"

namespace aot {

// A product term over `num_vars` variables. Bit i of `mask` set means the
// variable with weight 2^i is absent from the term.
struct Implicant {
  std::uint32_t value = 0;
  std::uint32_t mask = 0;

  bool Covers(std::uint32_t minterm) const { return (minterm & ~mask) == (value & ~mask); }
  int LiteralCount(int num_vars) const;
  // MSB-first cube notation: '0', '1' or '-' per variable.
  std::string Cube(int num_vars) const;
  bool operator==(const Implicant&) const = default;
};

// All prime implicants of on-set + dc-set, sorted by cube string.
std::vector<Implicant> PrimeImplicants(int num_vars, const std::vector<std::uint32_t>& ones,
                                       const std::vector<std::uint32_t>& dont_cares);

// A minimum-size set of prime implicants covering every minterm in `ones`.
// Among minimum covers the one whose sorted cube list is lexicographically
// smallest ('-' < '0' < '1') is returned. Empty when `ones` is empty.
std::vector<Implicant> MinimumCover(int num_vars, const std::vector<std::uint32_t>& ones,
                                    const std::vector<std::uint32_t>& dont_cares);

// Sum-of-products text in the Boolean IR syntax: "a AND NOT b OR c".
// Products with several literals are parenthesized when there is more than
// one product. "0" for an empty cover, "1" for a cover by the empty product.
std::string SumOfProducts(const std::vector<Implicant>& cover,
                          const std::vector<std::string>& variables);

// The K-map as Boolean equations over its variables. The output is named by
// the map's `output` field, or "out".
ir::BooleanEqnsIr MinimizeKMap(const ir::KMapIr& kmap);

}  // namespace aot

#endif  // AOT_KMAP_H_
