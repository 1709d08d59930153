#include "corpus.hpp"

#include "shortpath/bounds.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace shortpath;

namespace {

// Newton iteration on S(x) = sigma from the left of the root; independent of
// the library's bisection.
double entropy_inverse_newton(double sigma) {
  double x = 1e-3;
  for (int i = 0; i < 100; ++i) {
    const double f = -x * std::log2(x) - (1 - x) * std::log2(1 - x) - sigma;
    const double df = std::log2((1 - x) / x);
    x -= f / df;
  }
  return x;
}

// Gram matrix of (X/N)^K applied to each ground basis vector, via explicit
// state vectors.
double pxk_norm_by_vectors(const GroundSpaceInfo& g, int n, int K) {
  std::vector<Vector> cols;
  for (Index u : g.ground_indices) {
    Vector v = Vector::Zero(Index{1} << n);
    v[u] = 1.0;
    apply_xk(v, n, K);
    cols.push_back(v);
  }
  Matrix gram(cols.size(), cols.size());
  for (std::size_t a = 0; a < cols.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) gram(a, b) = cols[a].dot(cols[b]);
  return std::sqrt(Eigen::SelfAdjointEigenSolver<Matrix>(gram).eigenvalues().maxCoeff());
}

}  // namespace

TEST_CASE("binary entropy and tau endpoints") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(tau(0.0) == 0.0);
  CHECK(tau(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tau_inverse(1.0) == 1.0);
  CHECK(tau_inverse(0.0) == 0.0);
}

TEST_CASE("tau(1/2) against a Newton oracle") {
  const double x = entropy_inverse_newton(0.5);
  CHECK(x == doctest::Approx(0.110028).epsilon(1e-5));
  CHECK(binary_entropy_inverse(0.5) == doctest::Approx(x).epsilon(1e-11));
  const double t = 2 * std::sqrt(x * (1 - x));
  CHECK(tau(0.5) == doctest::Approx(t).epsilon(1e-11));
  CHECK(tau(0.5) == doctest::Approx(0.6258489705527797).epsilon(1e-11));
}

TEST_CASE("tau is increasing and tau_inverse undoes it") {
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double s = i / 200.0;
    const double t = tau(s);
    CHECK(t > prev);
    prev = t;
    CHECK(std::abs(tau_inverse(t) - s) <= 1e-10);
  }
}

TEST_CASE("entropy_and_tau dispatch and domain") {
  CHECK(entropy_and_tau(0.5, EntropyFunction::S) == 1.0);
  CHECK(entropy_and_tau(0.5, EntropyFunction::Tau) == tau(0.5));
  CHECK_THROWS_AS(entropy_and_tau(1.5, EntropyFunction::Tau), PreconditionError);
  CHECK_THROWS_AS(entropy_and_tau(-0.1, EntropyFunction::SInverse), PreconditionError);
}

TEST_CASE("entropy checks on |0000>, K = 1") {
  const StateEntropyRecord r = state_entropy_checks(make_state(BasisState{0}, 4), 1);
  CHECK(r.s_comp == 0.0);
  CHECK(r.x_over_n == 0.0);
  CHECK(r.sx_ok);
  REQUIRE(r.s_sequence.size() == 2);
  CHECK(r.s_sequence[1] == doctest::Approx(2.0));
  CHECK(r.exact_x2k == doctest::Approx(0.25));
  CHECK(r.genineq_bound == doctest::Approx(0.39168693394197407).epsilon(1e-11));
  CHECK(r.genineq_ok);
}

TEST_CASE("psi_+ saturates the single-step bound") {
  const StateEntropyRecord r = state_entropy_checks(make_state(PsiPlus{}, 6), 2);
  CHECK(r.s_comp == doctest::Approx(6.0));
  CHECK(r.x_over_n == doctest::Approx(1.0));
  CHECK(r.sx_bound == doctest::Approx(1.0));
  CHECK(r.sx_ok);
}

TEST_CASE("entropy inequalities on random states") {
  std::uint64_t seed = 1;
  for (int n = 4; n <= 8; ++n)
    for (int trial = 0; trial < 30; ++trial) {
      CounterRng rng(seed++, 3);
      std::vector<Index> support;
      const Index size = 1 + static_cast<Index>(rng.below(std::uint64_t{1} << n));
      for (Index i = 0; i < size; ++i) support.push_back(static_cast<Index>(rng.below(std::uint64_t{1} << n)));
      std::sort(support.begin(), support.end());
      support.erase(std::unique(support.begin(), support.end()), support.end());
      const StateVector psi = make_state(RandomOn{support, seed}, n);
      for (int K = 1; K <= 3; ++K) {
        const StateEntropyRecord r = state_entropy_checks(psi, K);
        CAPTURE(n);
        CAPTURE(K);
        CHECK(r.sx_ok);
        CHECK(r.genineq_ok);
        CHECK(r.genineqbasis_ok);
        CHECK(r.loose_ok);
        CHECK(r.pbound_ok);
      }
    }
}

TEST_CASE("p_xk_norm examples") {
  const GroundSpaceInfo g2 = ground_space(evaluate_hz(corpus::single_term()));
  const PxkNorm n2 = p_xk_norm(g2, 2, 1);
  CHECK(n2.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(n2.sampled);
  for (int n : {3, 6, 9}) {
    const GroundSpaceInfo g = ground_space(evaluate_hz(corpus::uniform_field(n)));
    CHECK(p_xk_norm(g, n, 1).value == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-14));
  }
}

TEST_CASE("p_xk_norm matches explicit vectors and stays below the support bound") {
  for (const auto& e : corpus::build(8)) {
    const int n = e.instance.n_qubits();
    const GroundSpaceInfo g = ground_space(evaluate_hz(e.instance));
    for (int K = 1; K <= 3; ++K) {
      CAPTURE(e.name);
      CAPTURE(K);
      const double v = p_xk_norm(g, n, K).value;
      CHECK(v == doctest::Approx(pxk_norm_by_vectors(g, n, K)).epsilon(1e-12));
      CHECK(v <= pbound(static_cast<double>(g.n0), n, K) + 1e-12);
    }
  }
}

TEST_CASE("p_xk_norm samples above the column cap") {
  const GroundSpaceInfo g = ground_space(evaluate_hz(corpus::ferro_pairs(10)));
  const PxkNorm full = p_xk_norm(g, 10, 2);
  const PxkNorm part = p_xk_norm(g, 10, 2, std::nullopt, 8);
  CHECK(part.sampled);
  CHECK(part.columns == 8);
  CHECK(part.value <= full.value + 1e-12);
}

TEST_CASE("kbound examples") {
  const KboundRecord r = kbound_check(1, 1024, 3, 100);
  CHECK(r.lhs == doctest::Approx(0.17850183088214977).epsilon(1e-10));
  CHECK(r.pass);
  CHECK_FALSE(r.saturated);
  // independent evaluation: tau from the Newton oracle
  const double arg = (3.5 * 10 + 1) / 1024.0;
  const double x = entropy_inverse_newton(arg);
  CHECK(r.lhs == doctest::Approx(100 * std::pow(2 * std::sqrt(x * (1 - x)), 3)).epsilon(1e-9));
  CHECK(kbound_check(1, 1024, 3, 0).lhs == 0.0);
  const KboundRecord sat = kbound_check(64, 8, 3, 2.0);
  CHECK(sat.saturated);
  CHECK(sat.lhs == doctest::Approx(2.0));
  CHECK_FALSE(sat.pass);
}

TEST_CASE("density of states") {
  const DosHistogram h = dos_histogram(evaluate_hz(corpus::single_term()));
  CHECK(h.counts == std::vector<std::uint64_t>{2, 0, 2});
  CHECK(h.total == 4);
  for (const auto& e : corpus::build(10)) {
    const DiagonalTable t = evaluate_hz(e.instance);
    const DosHistogram d = dos_histogram(t);
    std::uint64_t sum = 0;
    for (auto c : d.counts) sum += c;
    CHECK(sum == d.total);
    CHECK(d.counts[0] >= static_cast<std::uint64_t>(ground_space(t).n0));
  }
}

TEST_CASE("power-law fit recovers an exact exponent") {
  DosHistogram h;
  h.counts = {1};
  for (int k = 1; k <= 10; ++k) h.counts.push_back(std::uint64_t{1} << (2 * k));  // log2 W = 2k
  const PowerLawFit fit = dos_powerlaw_fit(h, 1, 10);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(dos_powerlaw_fit(h, 20, 30), PreconditionError);
}

TEST_CASE("theorem constants from key-value text") {
  std::istringstream in("# comment\nc_err = 2.5\n  c_log=0.5  # trailing\n\nhassoln_c3 = 3\n");
  const TheoremConstants c = load_constants(in);
  CHECK(c.c_err == 2.5);
  CHECK(c.c_log == 0.5);
  CHECK(c.hassoln_c3 == 3.0);
  CHECK(c.c_tau == 1.0);
  std::istringstream bad("c_unknown = 1\n");
  CHECK_THROWS_AS(load_constants(bad), ParseError);
  std::istringstream neg("c_err = -1\n");
  CHECK_THROWS_AS(load_constants(neg), ParseError);
}

TEST_CASE("item-2 check: degenerate and saturated forms") {
  const DiagonalTable t = evaluate_hz(generate(SkPm{}, 8, 1));
  const DosHistogram h = dos_histogram(t);
  const Item2Check zero = theorem1_item2_check(h, 0.0, 2, 8, 2, 28);
  CHECK(zero.degenerate_f);
  CHECK_FALSE(zero.witness_bin);

  const double B = 2.0;
  const int K = 2;
  const Item2Check r = theorem1_item2_check(h, B, K, 8, 2, 28);
  const double x_min = 8 * std::pow(10 * B, -1.0 / K);
  CHECK(r.x_min == doctest::Approx(x_min));
  const double base = t.e0 + 28.0 * K * K * 4 / (x_min * x_min);
  CHECK(r.f_at_zero == doctest::Approx(base));
  CHECK(r.f_at_n == doctest::Approx(base + 2.5 * B));
}

TEST_CASE("item-2 witness on a highly degenerate toy model") {
  const Instance inst = corpus::ferro_pairs(14);
  const DiagonalTable t = evaluate_hz(inst);
  const DosHistogram h = dos_histogram(t);
  TheoremConstants c;
  c.c_err = 0.0;
  const Item2Check r = theorem1_item2_check(h, 0.5, 1, 14, 2, inst.j_tot(), c);
  REQUIRE(r.witness_bin);
  CHECK(*r.witness_bin >= 1);
}

TEST_CASE("parameter choice for the high and low regimes") {
  const ParameterChoice p = thm3_parameters(2.0, 1.0, 1e6, 10.0);
  CHECK(p.regime == Thm3Regime::High);
  CHECK(p.exponent == 0.0);
  CHECK(p.K == 139.0);
  CHECK(p.b == 0.1);
  CHECK(p.x_min <= p.n);
  const HassolnRecord h = hassoln_lhs(p.K, 1e6, -1e12);
  CHECK_FALSE(h.violated);
  CHECK(h.lhs == doctest::Approx(3.8e10).epsilon(0.05));

  CHECK(thm3_parameters(11.0 / 7.0, 1.0, 1e4, 1.0).regime == Thm3Regime::Low);
  CHECK(thm3_parameters(11.0 / 7.0, 1.0, 1e4, 1.0).exponent == doctest::Approx(2.0 / 7.0));
  CHECK(thm3_parameters(11.0 / 7.0 + 1e-9, 1.0, 1e4, 1.0).exponent == doctest::Approx(2.0 / 7.0));
  CHECK(thm3_parameters(10.0 / 7.0 + 1e-12, 1.0, 1e4, 1.0).exponent == doctest::Approx(5.0 / 7.0));
  CHECK_THROWS_AS(thm3_parameters(10.0 / 7.0, 1.0, 1e4, 1.0), PreconditionError);
  CHECK_THROWS_AS(thm3_parameters(2.1, 1.0, 1e4, 1.0), PreconditionError);
}

TEST_CASE("classical baseline on the single-term instance") {
  const Instance inst = corpus::single_term();
  const BaselineRecord r = classical_baseline(inst, evaluate_hz(inst));
  CHECK(r.ground_state == 1);
  CHECK(r.local_fields == std::vector<double>{1.0, -1.0});
  CHECK(r.threshold == 1.0);
  CHECK(r.field_bound_holds);
  REQUIRE(r.n_choice_exact);
  REQUIRE(r.brute_count);
  CHECK(*r.n_choice_exact == 2);
  CHECK(*r.brute_count == 2);
}

TEST_CASE("baseline counting formula equals brute force") {
  for (int n = 3; n <= 12; ++n)
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Instance inst = generate(SkPm{}, n, seed);
      const BaselineRecord r = classical_baseline(inst, evaluate_hz(inst));
      CAPTURE(n);
      CHECK(r.field_bound_holds);
      REQUIRE(r.n_choice_exact);
      REQUIRE(r.brute_count);
      CHECK(*r.n_choice_exact == *r.brute_count);
      CHECK(std::exp2(r.n_choice_log2) == doctest::Approx(static_cast<double>(*r.brute_count)));
    }
  CHECK_THROWS_AS(classical_baseline(corpus::uniform_field(3), evaluate_hz(corpus::uniform_field(3))),
                  PreconditionError);
}
