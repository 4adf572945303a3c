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

#include "aot/kmap.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "aot/bool_expr.h"
#include "aot/errors.h"
#include "aot/ir.h"

namespace aot {
namespace {

// Independent cube model: per variable 0, 1 or 2 (absent).
using Cube = std::vector<int>;

bool CubeCovers(const Cube& cube, std::uint32_t m) {
  int n = static_cast<int>(cube.size());
  for (int v = 0; v < n; ++v) {
    int bit = (m >> (n - 1 - v)) & 1;
    if (cube[v] != 2 && cube[v] != bit) return false;
  }
  return true;
}

std::vector<Cube> AllCubes(int n) {
  std::vector<Cube> cubes;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    Cube c(n);
    int x = code;
    for (int v = 0; v < n; ++v) {
      c[v] = x % 3;
      x /= 3;
    }
    cubes.push_back(c);
  }
  return cubes;
}

// Smallest number of cubes, none touching an off-set minterm, covering `ones`.
int BruteForceMinimumCover(int n, const std::set<std::uint32_t>& ones, const std::set<std::uint32_t>& zeros) {
  if (ones.empty()) return 0;
  std::vector<Cube> implicants;
  for (const auto& c : AllCubes(n)) {
    bool ok = std::none_of(zeros.begin(), zeros.end(), [&](auto z) { return CubeCovers(c, z); });
    bool useful = std::any_of(ones.begin(), ones.end(), [&](auto o) { return CubeCovers(c, o); });
    if (ok && useful) implicants.push_back(c);
  }
  std::vector<std::uint64_t> masks;
  std::vector<std::uint32_t> on(ones.begin(), ones.end());
  for (const auto& c : implicants) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < on.size(); ++i) {
      if (CubeCovers(c, on[i])) m |= 1ull << i;
    }
    masks.push_back(m);
  }
  std::uint64_t full = on.size() == 64 ? ~0ull : (1ull << on.size()) - 1;
  for (int k = 1; k <= static_cast<int>(masks.size()); ++k) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::uint64_t acc = 0;
      for (int i : idx) acc |= masks[i];
      if (acc == full) return k;
      int i = k - 1;
      while (i >= 0 && idx[i] == static_cast<int>(masks.size()) - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return -1;
}

// Splits minterms by cell value using the standard Gray-coded axes.
struct Sets {
  std::set<std::uint32_t> ones, zeros, dcs;
};

int Gray(int x) { return x ^ (x >> 1); }

ir::KMapIr RandomMap(int rows_vars, int col_vars, std::mt19937& rng, bool with_dc) {
  ir::KMapIr k;
  const char* names = "abcd";
  for (int i = 0; i < rows_vars; ++i) k.row_vars.push_back(std::string(1, names[i]));
  for (int i = 0; i < col_vars; ++i) k.col_vars.push_back(std::string(1, names[rows_vars + i]));
  std::uniform_int_distribution<int> d(0, with_dc ? 2 : 1);
  k.cells.assign(1 << rows_vars, std::vector<ir::KMapCell>(1 << col_vars));
  for (auto& row : k.cells) {
    for (auto& cell : row) cell = static_cast<ir::KMapCell>(d(rng));
  }
  return k;
}

// Checks the minimized expression against every cell via the axis labels.
void ExpectAgreesWithCells(const ir::KMapIr& k) {
  auto eqns = MinimizeKMap(k);
  auto expr = ParseBoolExpr(eqns.expressions.at(eqns.outputs.at(0)));
  int nr = static_cast<int>(k.row_vars.size());
  int nc = static_cast<int>(k.col_vars.size());
  for (int r = 0; r < (1 << nr); ++r) {
    for (int c = 0; c < (1 << nc); ++c) {
      if (k.cells[r][c] == ir::KMapCell::kDontCare) continue;
      std::map<std::string, bool> env;
      for (int i = 0; i < nr; ++i) env[k.row_vars[i]] = (Gray(r) >> (nr - 1 - i)) & 1;
      for (int i = 0; i < nc; ++i) env[k.col_vars[i]] = (Gray(c) >> (nc - 1 - i)) & 1;
      bool value = expr.Evaluate([&](const std::string& v) { return env.at(v); });
      EXPECT_EQ(value, k.cells[r][c] == ir::KMapCell::kOne)
          << "cell " << r << "," << c << " expr " << eqns.expressions.begin()->second;
    }
  }
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> Split(int n, std::uint32_t on_bits,
                                                                        std::uint32_t dc_bits = 0) {
  std::vector<std::uint32_t> ones, dcs;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    if (dc_bits >> m & 1) {
      dcs.push_back(m);
    } else if (on_bits >> m & 1) {
      ones.push_back(m);
    }
  }
  return {ones, dcs};
}

TEST(ImplicantTest, CubeAndLiterals) {
  Implicant i{0b100, 0b010};
  EXPECT_EQ(i.Cube(3), "1-0");
  EXPECT_EQ(i.LiteralCount(3), 2);
  EXPECT_TRUE(i.Covers(0b110));
  EXPECT_FALSE(i.Covers(0b101));
}

TEST(KMapTest, ConstantFunctions) {
  EXPECT_EQ(SumOfProducts(MinimumCover(2, {}, {}), {"a", "b"}), "0");
  EXPECT_EQ(SumOfProducts(MinimumCover(2, {0, 1, 2, 3}, {}), {"a", "b"}), "1");
}

TEST(KMapTest, ClassicExamples) {
  // f = sum m(0,1,2,5,6,7): minimum SOP has 3 products.
  auto cover = MinimumCover(3, {0, 1, 2, 5, 6, 7}, {});
  EXPECT_EQ(cover.size(), 3u);
  // Parity of three variables does not simplify.
  EXPECT_EQ(MinimumCover(3, {1, 2, 4, 7}, {}).size(), 4u);
  // Don't-cares let a single cube cover everything.
  EXPECT_EQ(MinimumCover(2, {0, 1}, {2, 3}).size(), 1u);
}

TEST(KMapTest, PrimeImplicantsMatchBruteForce) {
  for (std::uint32_t f = 0; f < 256; ++f) {
    auto [ones, dcs] = Split(3, f);
    std::set<std::string> expected;
    std::set<std::uint32_t> on(ones.begin(), ones.end());
    std::set<std::uint32_t> off;
    for (std::uint32_t m = 0; m < 8; ++m) {
      if (!on.contains(m)) off.insert(m);
    }
    auto is_implicant = [&](const Cube& c) {
      bool any = std::any_of(on.begin(), on.end(), [&](auto m) { return CubeCovers(c, m); });
      return any && std::none_of(off.begin(), off.end(), [&](auto m) { return CubeCovers(c, m); });
    };
    for (const auto& c : AllCubes(3)) {
      if (!is_implicant(c)) continue;
      bool prime = true;
      for (int v = 0; v < 3 && prime; ++v) {
        if (c[v] == 2) continue;
        Cube bigger = c;
        bigger[v] = 2;
        if (std::none_of(off.begin(), off.end(), [&](auto m) { return CubeCovers(bigger, m); })) prime = false;
      }
      if (!prime) continue;
      std::string s;
      for (int x : c) s += x == 2 ? '-' : static_cast<char>('0' + x);
      expected.insert(s);
    }
    std::set<std::string> actual;
    for (const auto& p : PrimeImplicants(3, ones, dcs)) actual.insert(p.Cube(3));
    EXPECT_EQ(actual, expected) << "f=" << f;
  }
}

TEST(KMapTest, MinimumCoverIsMinimalAndCorrectForAllSmallFunctions) {
  for (int n = 2; n <= 3; ++n) {
    for (std::uint32_t f = 0; f < (1u << (1u << n)); ++f) {
      auto [ones, dcs] = Split(n, f);
      auto cover = MinimumCover(n, ones, dcs);
      std::set<std::uint32_t> on(ones.begin(), ones.end()), off;
      for (std::uint32_t m = 0; m < (1u << n); ++m) {
        bool covered = std::any_of(cover.begin(), cover.end(), [&](const auto& i) { return i.Covers(m); });
        EXPECT_EQ(covered, on.contains(m)) << "n=" << n << " f=" << f << " m=" << m;
        if (!on.contains(m)) off.insert(m);
      }
      EXPECT_EQ(static_cast<int>(cover.size()), BruteForceMinimumCover(n, on, off)) << "n=" << n << " f=" << f;
    }
  }
}

TEST(KMapTest, DontCaresNeverIncreaseCoverSize) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t f = rng() & 0xffff;
    std::uint32_t dc = rng() & rng() & 0xffff;
    auto [ones, dcs] = Split(4, f, dc);
    auto [ones_only, none] = Split(4, f & ~dc);
    EXPECT_LE(MinimumCover(4, ones, dcs).size(), MinimumCover(4, ones_only, none).size());
  }
}

TEST(KMapTest, MinimizedMapsAgreeWithEveryCareCell) {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 100; ++trial) ExpectAgreesWithCells(RandomMap(2, 2, rng, true));
  for (int trial = 0; trial < 100; ++trial) ExpectAgreesWithCells(RandomMap(1, 2, rng, true));
  for (int trial = 0; trial < 50; ++trial) ExpectAgreesWithCells(RandomMap(1, 1, rng, true));
}

TEST(KMapTest, SumOfProductsSyntax) {
  std::vector<Implicant> cover = {{0b10, 0b00}, {0b01, 0b10}};
  EXPECT_EQ(SumOfProducts(cover, {"a", "b"}), "(a AND NOT b) OR b");
}

TEST(KMapTest, OutputNameDefaultsToOut) {
  ir::KMapIr k{{"a"}, {"b"}, {{ir::KMapCell::kZero, ir::KMapCell::kOne}, {ir::KMapCell::kOne, ir::KMapCell::kOne}},
               std::nullopt};
  auto eqns = MinimizeKMap(k);
  EXPECT_EQ(eqns.outputs, (std::vector<std::string>{"out"}));
  EXPECT_EQ(eqns.inputs, (std::vector<std::string>{"a", "b"}));
  // Ties sort by cube string with '-' first, so b ("-1") precedes a ("1-").
  EXPECT_EQ(eqns.expressions.at("out"), "b OR a");
}

TEST(KMapTest, InvalidMapIsRejected) {
  ir::KMapIr k{{"a"}, {"b"}, {{ir::KMapCell::kZero}}, std::nullopt};
  EXPECT_THROW(MinimizeKMap(k), ValidationError);
}

}  // namespace
}  // namespace aot
