#ifndef SHORTPATH_TESTS_CORPUS_HPP
#define SHORTPATH_TESTS_CORPUS_HPP

// Shared test instances: hand-built, random SK, toy models and the
// degenerate constructions (n0 = 1, 2, 4, 2^{N/2}).

#include "shortpath/instances.hpp"
#include "shortpath/rng.hpp"

#include <string>
#include <vector>

namespace corpus {

using shortpath::Instance;
using shortpath::RawTerm;

struct Entry {
  std::string name;
  Instance instance;
};

inline Instance single_term() { return shortpath::build_instance(2, 2, {{{0, 1}, 1.0}}); }

// sum_i Z_i: unique ground state |1...1>.
inline Instance uniform_field(int n) {
  std::vector<RawTerm> terms;
  for (int i = 0; i < n; ++i) terms.push_back({{i}, 1.0});
  return shortpath::build_instance(n, 1, terms);
}

// -Z0Z1 - Z2Z3 - ...: n0 = 2^{N/2}.
inline Instance ferro_pairs(int n) {
  std::vector<RawTerm> terms;
  for (int i = 0; i + 1 < n; i += 2) terms.push_back({{i, i + 1}, -1.0});
  return shortpath::build_instance(n, 2, terms);
}

// Two disconnected ferromagnetic chains: n0 = 4.
inline Instance two_chains(int n) {
  std::vector<RawTerm> terms;
  const int split = n / 2;
  for (int i = 0; i + 1 < split; ++i) terms.push_back({{i, i + 1}, -1.0});
  for (int i = split; i + 1 < n; ++i) terms.push_back({{i, i + 1}, -1.0});
  return shortpath::build_instance(n, 2, terms);
}

// Random +-1 weights on a random half of the triples.
inline Instance random_cubic(int n, std::uint64_t seed) {
  shortpath::CounterRng rng(seed, 77);
  std::vector<RawTerm> terms;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (rng.uniform() < 0.5) continue;
        terms.push_back({{i, j, k}, rng.uniform() < 0.5 ? 1.0 : -1.0});
      }
  return shortpath::build_instance(n, 3, terms);
}

inline std::vector<Entry> build(int max_n = 10) {
  std::vector<Entry> out;
  auto add = [&](std::string name, Instance inst) {
    if (inst.n_qubits() <= max_n) out.push_back({std::move(name), std::move(inst)});
  };
  add("single_term", single_term());
  add("chain3", shortpath::build_instance(3, 2, {{{0, 1}, 1.0}, {{1, 2}, 1.0}}));
  for (int n : {3, 6, 9}) add("field" + std::to_string(n), uniform_field(n));
  for (int n : {5, 7}) add("cubic" + std::to_string(n), random_cubic(n, 11 + n));
  for (int n = 2; n <= 10; ++n)
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      add("sk_pm_n" + std::to_string(n) + "_s" + std::to_string(seed),
          shortpath::generate(shortpath::SkPm{}, n, seed));
  add("toy_n5", shortpath::generate(shortpath::ToyModelSpec{2, 0.0, 1}, 5, 0));
  add("toy_n8", shortpath::generate(shortpath::ToyModelSpec{3, 0.5, 1}, 8, 0));
  add("toy_n10", shortpath::generate(shortpath::ToyModelSpec{4, 0.3, 2}, 10, 0));
  for (int n : {4, 6, 8, 10}) add("ferro_pairs" + std::to_string(n), ferro_pairs(n));
  for (int n : {6, 8}) add("two_chains" + std::to_string(n), two_chains(n));
  return out;
}

}  // namespace corpus

#endif  // SHORTPATH_TESTS_CORPUS_HPP
