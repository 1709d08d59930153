#include "shortpath/instances.hpp"

#include "shortpath/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace shortpath {

namespace {

std::string describe(const std::vector<int>& qubits, double weight) {
  std::ostringstream os;
  os << "term {";
  for (std::size_t i = 0; i < qubits.size(); ++i) os << (i ? "," : "") << qubits[i];
  os << "} weight " << weight;
  return os.str();
}

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", w);
  return buf;
}

}  // namespace

Instance Instance::with_beta_cap(double beta) const {
  Instance copy = *this;
  copy.beta_cap_ = beta;
  return copy;
}

std::optional<bool> Instance::beta_cap_satisfied() const {
  if (!beta_cap_) return std::nullopt;
  return j_tot_ <= std::pow(static_cast<double>(n_qubits_), *beta_cap_);
}

Instance build_instance(int n_qubits, int degree, std::vector<RawTerm> raw_terms) {
  if (n_qubits < 1) throw InstanceError("N must be at least 1, got " + std::to_string(n_qubits));
  if (degree < 1) throw InstanceError("D must be at least 1, got " + std::to_string(degree));
  if (n_qubits > 62) throw InstanceError("N above 62 cannot be indexed by a 64-bit basis label");

  std::map<std::vector<int>, double> merged;
  for (auto& [qubits, weight] : raw_terms) {
    if (static_cast<int>(qubits.size()) != degree)
      throw InstanceError(describe(qubits, weight) + " has " + std::to_string(qubits.size()) +
                          " qubits, expected D = " + std::to_string(degree));
    for (int q : qubits)
      if (q < 0 || q >= n_qubits)
        throw InstanceError(describe(qubits, weight) + ": index " + std::to_string(q) +
                            " out of range [0, " + std::to_string(n_qubits) + ")");
    if (!std::isfinite(weight)) throw InstanceError(describe(qubits, weight) + ": non-finite weight");
    std::sort(qubits.begin(), qubits.end());
    if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end())
      throw InstanceError(describe(qubits, weight) + ": repeated qubit index");
    merged[qubits] += weight;
  }

  Instance inst;
  inst.n_qubits_ = n_qubits;
  inst.degree_ = degree;
  for (auto& [qubits, weight] : merged) {
    if (weight == 0.0) continue;
    inst.terms_.push_back(Term{qubits, weight});
    inst.j_tot_ += std::abs(weight);
  }
  return inst;
}

std::string model_name(const ModelSpec& model) {
  struct {
    std::string operator()(const SkPm&) const { return "sk_pm"; }
    std::string operator()(const SkGaussian&) const { return "sk_gaussian"; }
    std::string operator()(const ToyModelSpec&) const { return "toy"; }
  } visitor;
  return std::visit(visitor, model);
}

Instance generate(const ModelSpec& model, int n_qubits, std::uint64_t seed) {
  if (n_qubits < 2) throw InstanceError("D = 2 families need N >= 2");
  std::vector<RawTerm> raw;

  if (std::holds_alternative<SkPm>(model) || std::holds_alternative<SkGaussian>(model)) {
    const bool gaussian = std::holds_alternative<SkGaussian>(model);
    CounterRng rng(seed);
    for (int i = 0; i < n_qubits; ++i)
      for (int j = i + 1; j < n_qubits; ++j) {
        double w = gaussian ? rng.normal() : ((rng.next_u64() >> 63) ? 1.0 : -1.0);
        raw.push_back({{i, j}, w});
      }
    return build_instance(n_qubits, 2, std::move(raw));
  }

  const auto& toy = std::get<ToyModelSpec>(model);
  if (toy.n1 <= 0 || toy.n1 >= n_qubits)
    throw InstanceError("toy model needs 0 < n1 < N, got n1 = " + std::to_string(toy.n1));
  if (!(toy.afm_density >= 0.0 && toy.afm_density <= 1.0))
    throw InstanceError("toy model afm_density must lie in [0, 1]");
  CounterRng rng(toy.seed);
  for (int i = 0; i < n_qubits; ++i)
    for (int j = i + 1; j < n_qubits; ++j) {
      const bool i_in_s1 = i < toy.n1;
      const bool j_in_s1 = j < toy.n1;
      if (i_in_s1 || j_in_s1) {
        raw.push_back({{i, j}, -1.0});
      } else if (rng.uniform() < toy.afm_density) {
        raw.push_back({{i, j}, 1.0});
      }
    }
  return build_instance(n_qubits, 2, std::move(raw));
}

Instance rescale_to_unit_gap(const Instance& instance, double exact_gap) {
  if (!(exact_gap > 0.0) || !std::isfinite(exact_gap))
    throw InstanceError("rescale_to_unit_gap needs a positive gap, got " + std::to_string(exact_gap));
  Instance out = instance;
  out.j_tot_ = 0.0;
  for (auto& t : out.terms_) {
    t.weight /= exact_gap;
    out.j_tot_ += std::abs(t.weight);
  }
  return out;
}

void save_instance(const Instance& instance, std::ostream& sink) {
  sink << instance.n_qubits() << ' ' << instance.degree() << '\n';
  if (instance.beta_cap()) sink << "#! beta_cap " << format_weight(*instance.beta_cap()) << '\n';
  for (const auto& t : instance.terms()) {
    for (int q : t.qubits) sink << q << ' ';
    sink << format_weight(t.weight) << '\n';
  }
}

Instance load_instance(std::istream& source) {
  std::string line;
  int line_no = 0;
  std::optional<std::pair<int, int>> header;
  std::optional<double> beta_cap;
  std::vector<RawTerm> raw;

  while (std::getline(source, line)) {
    ++line_no;
    if (line.rfind("#! beta_cap", 0) == 0) {
      std::istringstream ls(line.substr(11));
      double beta;
      if (!(ls >> beta)) throw ParseError("malformed beta_cap directive", line_no);
      beta_cap = beta;
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> fields;
    for (std::string f; ls >> f;) fields.push_back(f);
    if (fields.empty()) continue;

    if (!header) {
      if (fields.size() != 2) throw ParseError("header must be \"N D\"", line_no);
      try {
        std::size_t p1, p2;
        int n = std::stoi(fields[0], &p1);
        int d = std::stoi(fields[1], &p2);
        if (p1 != fields[0].size() || p2 != fields[1].size()) throw std::invalid_argument("");
        header = {n, d};
      } catch (const std::exception&) {
        throw ParseError("header must be two integers \"N D\"", line_no);
      }
      continue;
    }

    const auto d = static_cast<std::size_t>(header->second);
    if (fields.size() != d + 1)
      throw ParseError("expected " + std::to_string(d) + " indices and a weight, got " +
                           std::to_string(fields.size()) + " fields",
                       line_no);
    std::vector<int> qubits;
    for (std::size_t k = 0; k < d; ++k) {
      try {
        std::size_t pos;
        qubits.push_back(std::stoi(fields[k], &pos));
        if (pos != fields[k].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("non-integer qubit index '" + fields[k] + "'", line_no);
      }
      if (qubits.back() < 0 || qubits.back() >= header->first)
        throw ParseError("qubit index " + fields[k] + " out of range", line_no);
    }
    double w;
    try {
      std::size_t pos;
      w = std::stod(fields[d], &pos);
      if (pos != fields[d].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("non-numeric weight '" + fields[d] + "'", line_no);
    }
    raw.push_back({std::move(qubits), w});
  }
  if (!header) throw ParseError("missing \"N D\" header", line_no);
  try {
    Instance inst = build_instance(header->first, header->second, std::move(raw));
    return beta_cap ? inst.with_beta_cap(*beta_cap) : inst;
  } catch (const InstanceError& e) {
    throw ParseError(e.what(), line_no);
  }
}

void save_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  save_instance(instance, out);
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return load_instance(in);
}

}  // namespace shortpath
