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
#include <bit>
#include <map>
#include <set>

#include "aot/errors.h"

namespace aot {

int Implicant::LiteralCount(int num_vars) const {
  std::uint32_t all = num_vars >= 32 ? ~0u : ((1u << num_vars) - 1u);
  return std::popcount(all & ~mask);
}

std::string Implicant::Cube(int num_vars) const {
  std::string cube;
  for (int i = num_vars - 1; i >= 0; --i) {
    std::uint32_t bit = 1u << i;
    cube += (mask & bit) ? '-' : ((value & bit) ? '1' : '0');
  }
  return cube;
}

std::vector<Implicant> PrimeImplicants(int num_vars, const std::vector<std::uint32_t>& ones,
                                       const std::vector<std::uint32_t>& dont_cares) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> current;  // (mask, value)
  for (auto m : ones) current.insert({0, m});
  for (auto m : dont_cares) current.insert({0, m});
  std::set<std::pair<std::uint32_t, std::uint32_t>> primes;
  while (!current.empty()) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> next;
    std::set<std::pair<std::uint32_t, std::uint32_t>> merged;
    // Terms can only combine with terms sharing the same mask.
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_mask;
    for (const auto& [mask, value] : current) by_mask[mask].push_back(value);
    for (const auto& [mask, values] : by_mask) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
          std::uint32_t diff = values[i] ^ values[j];
          if (std::popcount(diff) != 1) continue;
          next.insert({mask | diff, values[i] & ~diff});
          merged.insert({mask, values[i]});
          merged.insert({mask, values[j]});
        }
      }
    }
    for (const auto& term : current) {
      if (!merged.contains(term)) primes.insert(term);
    }
    current = std::move(next);
  }
  std::vector<Implicant> out;
  for (const auto& [mask, value] : primes) out.push_back({value & ~mask, mask});
  std::sort(out.begin(), out.end(), [num_vars](const Implicant& a, const Implicant& b) {
    return a.Cube(num_vars) < b.Cube(num_vars);
  });
  return out;
}

namespace {

// Branch and bound over the cover table. Candidates are sorted by cube
// string, so exploring them in index order and keeping the first best
// solution of each size yields the lexicographically smallest one.
class CoverSearch {
 public:
  CoverSearch(std::vector<Implicant> primes, std::vector<std::uint32_t> targets)
      : primes_(std::move(primes)), targets_(std::move(targets)) {}

  std::vector<std::size_t> Run() {
    std::vector<std::size_t> chosen;
    std::vector<bool> covered(targets_.size(), false);
    Search(chosen, covered);
    return best_;
  }

 private:
  void Search(std::vector<std::size_t>& chosen, std::vector<bool>& covered) {
    if (found_ && chosen.size() > best_.size()) return;
    std::size_t first = covered.size();
    for (std::size_t i = 0; i < covered.size(); ++i) {
      if (!covered[i]) {
        first = i;
        break;
      }
    }
    if (first == covered.size()) {
      std::vector<std::size_t> sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      if (!found_ || sorted.size() < best_.size() || (sorted.size() == best_.size() && sorted < best_)) {
        best_ = std::move(sorted);
        found_ = true;
      }
      return;
    }
    if (found_ && chosen.size() + 1 > best_.size()) return;
    for (std::size_t p = 0; p < primes_.size(); ++p) {
      if (!primes_[p].Covers(targets_[first])) continue;
      std::vector<bool> saved = covered;
      for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (primes_[p].Covers(targets_[i])) covered[i] = true;
      }
      chosen.push_back(p);
      Search(chosen, covered);
      chosen.pop_back();
      covered = std::move(saved);
    }
  }

  std::vector<Implicant> primes_;
  std::vector<std::uint32_t> targets_;
  std::vector<std::size_t> best_;
  bool found_ = false;
};

}  // namespace

std::vector<Implicant> MinimumCover(int num_vars, const std::vector<std::uint32_t>& ones,
                                    const std::vector<std::uint32_t>& dont_cares) {
  if (ones.empty()) return {};
  std::vector<Implicant> primes = PrimeImplicants(num_vars, ones, dont_cares);

  // Essential primes: the only prime covering some minterm.
  std::set<std::size_t> essential;
  for (auto m : ones) {
    std::size_t count = 0;
    std::size_t last = 0;
    for (std::size_t p = 0; p < primes.size(); ++p) {
      if (primes[p].Covers(m)) {
        ++count;
        last = p;
      }
    }
    if (count == 1) essential.insert(last);
  }
  std::vector<std::uint32_t> remaining;
  for (auto m : ones) {
    bool covered = false;
    for (auto p : essential) covered |= primes[p].Covers(m);
    if (!covered) remaining.push_back(m);
  }
  std::vector<Implicant> candidates;
  for (std::size_t p = 0; p < primes.size(); ++p) {
    if (essential.contains(p)) continue;
    bool useful = false;
    for (auto m : remaining) useful |= primes[p].Covers(m);
    if (useful) candidates.push_back(primes[p]);
  }
  std::vector<Implicant> cover;
  for (auto p : essential) cover.push_back(primes[p]);
  if (!remaining.empty()) {
    for (auto idx : CoverSearch(candidates, remaining).Run()) cover.push_back(candidates[idx]);
  }
  std::sort(cover.begin(), cover.end(), [num_vars](const Implicant& a, const Implicant& b) {
    return a.Cube(num_vars) < b.Cube(num_vars);
  });
  return cover;
}

std::string SumOfProducts(const std::vector<Implicant>& cover, const std::vector<std::string>& variables) {
  if (cover.empty()) return "0";
  int n = static_cast<int>(variables.size());
  std::vector<std::string> products;
  for (const auto& term : cover) {
    std::vector<std::string> literals;
    for (int i = 0; i < n; ++i) {
      std::uint32_t bit = 1u << (n - 1 - i);
      if (term.mask & bit) continue;
      literals.push_back((term.value & bit) ? variables[i] : "NOT " + variables[i]);
    }
    if (literals.empty()) return "1";
    std::string product;
    for (std::size_t i = 0; i < literals.size(); ++i) product += (i ? " AND " : "") + literals[i];
    if (literals.size() > 1 && cover.size() > 1) product = "(" + product + ")";
    products.push_back(std::move(product));
  }
  std::string out;
  for (std::size_t i = 0; i < products.size(); ++i) out += (i ? " OR " : "") + products[i];
  return out;
}

ir::BooleanEqnsIr MinimizeKMap(const ir::KMapIr& kmap) {
  ir::IntermediateRep wrapped{Classification2::kKMap, kmap};
  if (auto violations = ir::Validate(wrapped); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  int n = static_cast<int>(kmap.VariableCount());
  std::vector<std::uint32_t> ones;
  std::vector<std::uint32_t> dont_cares;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    switch (kmap.CellForMinterm(m)) {
      case ir::KMapCell::kOne:
        ones.push_back(m);
        break;
      case ir::KMapCell::kDontCare:
        dont_cares.push_back(m);
        break;
      case ir::KMapCell::kZero:
        break;
    }
  }
  ir::BooleanEqnsIr eqns;
  eqns.inputs = kmap.Variables();
  std::string output = kmap.output.value_or("out");
  eqns.outputs = {output};
  eqns.expressions[output] = SumOfProducts(MinimumCover(n, ones, dont_cares), eqns.inputs);
  return eqns;
}

}  // namespace aot
