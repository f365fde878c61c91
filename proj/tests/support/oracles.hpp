#pragma once

// Test-only reference implementations. Nothing here calls the code paths
// under test beyond the domain types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fairfront/core_model.hpp"

namespace fairfront::testing {

/// O(m^2) Pareto flags straight from the dominance definition.
inline std::vector<std::uint8_t> brute_force_front(std::span<const double> x,
                                                   std::span<const double> y) {
  const std::size_t m = x.size();
  std::vector<std::uint8_t> flags(m, 1);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const bool weakly = x[a] >= x[b] && y[a] >= y[b];
      const bool strictly = x[a] > x[b] || y[a] > y[b];
      if (weakly && strictly) {
        flags[b] = 0;
        break;
      }
    }
  }
  return flags;
}

/// Lender's expected profit written out term by term.
inline double lending_expected(double p, double z, double s, int decision) {
  if (decision == 0) return 0.0;
  return p * z * s - (1.0 - p) * s;
}

struct SyntheticSpec {
  std::size_t size = 200;
  std::size_t groups = 2;
  std::uint64_t seed = 1;
  bool binary_scores = false;  // p in {0,1} and p == y
  bool with_amount = false;
  bool with_age = false;
};

/// Random individuals: scores uniform on a 1/1000 lattice, outcome drawn
/// from the score, labels G0, G1, ...
inline std::vector<Individual> synthetic_individuals(const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> lattice(0, 1000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> age(18, 75);
  std::vector<Individual> out;
  out.reserve(spec.size);
  for (std::size_t i = 0; i < spec.size; ++i) {
    Individual ind;
    ind.id = "r" + std::to_string(i);
    // Every group appears at least twice.
    const std::size_t g = i < 2 * spec.groups ? i % spec.groups : rng() % spec.groups;
    ind.group = "G" + std::to_string(g);
    if (spec.binary_scores) {
      ind.outcome = static_cast<int>(rng() % 2);
      ind.score = ind.outcome;
    } else {
      ind.score = lattice(rng) / 1000.0;
      ind.outcome = unit(rng) < ind.score ? 1 : 0;
    }
    // Keep one repaying claim holder per group.
    if (i < spec.groups) {
      ind.outcome = 1;
      if (spec.binary_scores) ind.score = 1.0;
    }
    if (spec.with_amount) ind.amount = 100.0 * (1 + rng() % 50);
    if (spec.with_age) ind.attributes["age"] = static_cast<double>(age(rng));
    out.push_back(std::move(ind));
  }
  return out;
}

inline Dataset synthetic_dataset(const SyntheticSpec& spec) {
  return Dataset::create(synthetic_individuals(spec));
}

inline std::string synthetic_csv(const SyntheticSpec& spec) {
  std::string csv = spec.with_amount ? "id,score,group,outcome,amount\n" : "id,score,group,outcome\n";
  char buf[64];
  for (const auto& ind : synthetic_individuals(spec)) {
    std::snprintf(buf, sizeof buf, "%.17g", ind.score);
    csv += ind.id + "," + buf + "," + ind.group + "," + std::to_string(ind.outcome);
    if (spec.with_amount) {
      std::snprintf(buf, sizeof buf, "%.17g", ind.amount);
      csv += std::string(",") + buf;
    }
    csv += "\n";
  }
  return csv;
}

/// The four-person fixture: (p, group, y) = (0.9,F,1), (0.5,F,1),
/// (0.95,M,1), (0.6,M,0).
inline Dataset fixture4() {
  std::vector<Individual> people(4);
  people[0] = {"a", 0.9, "F", 1, 1.0, {}};
  people[1] = {"b", 0.5, "F", 1, 1.0, {}};
  people[2] = {"c", 0.95, "M", 1, 1.0, {}};
  people[3] = {"d", 0.6, "M", 0, 1.0, {}};
  return Dataset::create(std::move(people));
}

}  // namespace fairfront::testing
