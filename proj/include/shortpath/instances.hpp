#ifndef SHORTPATH_INSTANCES_HPP
#define SHORTPATH_INSTANCES_HPP

#include "shortpath/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace shortpath {

/// One weighted Z-product: weight * prod_{i in qubits} Z_i.
struct Term {
  std::vector<int> qubits;  // sorted, distinct
  double weight = 0.0;

  bool operator==(const Term&) const = default;
};

/// A MAX-D-LIN-2 objective H_Z = sum_t w_t Z_{q_1} ... Z_{q_D}.
/// Immutable once built; construct through build_instance().
class Instance {
 public:
  int n_qubits() const { return n_qubits_; }
  int degree() const { return degree_; }
  const std::vector<Term>& terms() const { return terms_; }
  double j_tot() const { return j_tot_; }

  std::optional<double> beta_cap() const { return beta_cap_; }
  Instance with_beta_cap(double beta) const;
  /// Metadata only: J_tot <= N^beta. Empty when no cap is recorded.
  std::optional<bool> beta_cap_satisfied() const;

  bool operator==(const Instance&) const = default;

 private:
  friend Instance build_instance(int, int, std::vector<std::pair<std::vector<int>, double>>);
  friend Instance rescale_to_unit_gap(const Instance&, double);

  int n_qubits_ = 0;
  int degree_ = 0;
  std::vector<Term> terms_;
  double j_tot_ = 0.0;
  std::optional<double> beta_cap_;
};

using RawTerm = std::pair<std::vector<int>, double>;

/// Validates arity and ranges, merges duplicate qubit sets by summing weights
/// and drops terms whose (merged) weight is zero. Terms come out sorted by
/// qubit set.
Instance build_instance(int n_qubits, int degree, std::vector<RawTerm> raw_terms);

struct SkPm {};
struct SkGaussian {};
struct ToyModelSpec {
  int n1 = 1;
  double afm_density = 0.0;
  std::uint64_t seed = 0;
};
using ModelSpec = std::variant<SkPm, SkGaussian, ToyModelSpec>;

std::string model_name(const ModelSpec& model);

/// D = 2 random and toy families. The toy model uses S1 = {0..n1-1}:
/// weight -1 inside S1 and across S1 x S2, +1 with probability p inside S2
/// (pair draws use the ToyModelSpec seed; `seed` is ignored for toy).
Instance generate(const ModelSpec& model, int n_qubits, std::uint64_t seed);

/// Divides every weight by `exact_gap` so that the measured gap becomes 1.
Instance rescale_to_unit_gap(const Instance& instance, double exact_gap);

/// Text format: "N D" header, then "q1 ... qD w" lines, '#' comments.
/// Weights are written with 17 significant digits.
void save_instance(const Instance& instance, std::ostream& sink);
Instance load_instance(std::istream& source);

void save_instance_file(const Instance& instance, const std::string& path);
Instance load_instance_file(const std::string& path);

}  // namespace shortpath

#endif  // SHORTPATH_INSTANCES_HPP
