#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "massqcrb/evolution.hpp"
#include "massqcrb/overlap.hpp"
#include "massqcrb/perturbation.hpp"
#include "massqcrb/state.hpp"
#include "oracles.hpp"

using namespace massqcrb;

TEST_SUITE("perturbation") {
  TEST_CASE("parameters and validation") {
    Perturbation p(0.2);
    CHECK(p.y() == doctest::Approx(0.2 / 1.8).epsilon(1e-15));
    CHECK(p.q() == doctest::Approx(2.0 * std::sqrt(0.8) / 1.8).epsilon(1e-15));
    CHECK(p.delta_m_over_m() == doctest::Approx(0.4));
    CHECK(Perturbation(0.0).y() == 0.0);
    CHECK(Perturbation(0.0).q() == 1.0);
    CHECK_THROWS_AS(Perturbation(-1e-3), std::invalid_argument);  // removed mass rejected
    CHECK_THROWS_AS(Perturbation(1.0), std::invalid_argument);
    CHECK_THROWS_AS(EvolutionTime(-0.1), std::invalid_argument);
  }
}

TEST_SUITE("overlap") {
  TEST_CASE("ground-ground element equals the Gaussian overlap sqrt(q)") {
    // Two oscillator ground states of frequencies w and w(1-eps) overlap as
    // (w w~)^{1/4} sqrt(2/(w+w~)) = sqrt(q); hand-derived reference at eps=0.2.
    Perturbation p(0.2);
    const double expect = std::sqrt(2.0 * std::sqrt(0.8) / 1.8);
    CHECK(overlap_element(0, 0, p) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(overlap_element(0, 0, p) ==
          doctest::Approx(oracles::overlap_quadrature(0, 0, 0.8, 1.0, 64)).epsilon(1e-12));
  }

  TEST_CASE("opposite parity vanishes exactly") {
    Perturbation p(0.1);
    CHECK(overlap_element(1, 0, p) == 0.0);
    CHECK(overlap_element(0, 3, p) == 0.0);
    CHECK(overlap_element(6, 3, p) == 0.0);
  }

  TEST_CASE("first excited-to-ground coupling, hand-derived sign") {
    // R(2,0) = -y sqrt(q/2): the wider ground state leans on |2> of the
    // narrower basis with a negative amplitude.
    Perturbation p(0.2);
    const double expect = -p.y() * std::sqrt(p.q() / 2.0);
    CHECK(overlap_element(2, 0, p) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(overlap_element(2, 0, p) ==
          doctest::Approx(oracles::overlap_quadrature(2, 0, 0.8, 1.0, 64)).epsilon(1e-12));
  }

  TEST_CASE("matches Hermite-function quadrature across a block") {
    for (double eps : {0.05, 0.1}) {
      Perturbation p(eps);
      const double wb = 1.0 - eps;
      for (int m = 0; m < 12; ++m) {
        for (int n = m % 2; n < 12; n += 2) {
          const double ref = oracles::overlap_quadrature(m, n, wb, 1.0, 96);
          CHECK(std::abs(overlap_element(m, n, p) - ref) <= 1e-8);
        }
      }
    }
  }

  TEST_CASE("log-gamma branch agrees with quadrature at high levels") {
    Perturbation p(0.05);
    const double wb = 0.95;
    for (auto [m, n] : {std::pair{40, 40}, {25, 21}, {48, 40}, {33, 41}}) {
      const double ref = oracles::overlap_quadrature(m, n, wb, 1.0, 220);
      CHECK(std::abs(overlap_element(m, n, p) - ref) <= 1e-8);
    }
  }

  TEST_CASE("direct and log-gamma branches agree near the switchover") {
    // Same formula, two evaluation paths: compare at indices where both are
    // trustworthy via quadrature.
    Perturbation p(0.08);
    for (int m : {18, 19, 20}) {
      const double ref = oracles::overlap_quadrature(m, m, 0.92, 1.0, 160);
      CHECK(std::abs(overlap_element(m, m, p) - ref) <= 1e-10);
    }
  }

  TEST_CASE("transpose relation under frequency swap") {
    // <m; w~ | n; w> equals <n; w | m; w~>, i.e. the quadrature with the two
    // frequency roles exchanged.
    Perturbation p(0.1);
    for (auto [m, n] : {std::pair{4, 2}, {7, 3}, {10, 0}}) {
      const double swapped = oracles::overlap_quadrature(n, m, 1.0, 0.9, 96);
      CHECK(overlap_element(m, n, p) == doctest::Approx(swapped).epsilon(1e-10));
    }
  }

  TEST_CASE("identity at eps = 0 and the small-eps identity limit") {
    OverlapMatrix id = overlap_matrix(Perturbation(0.0), 8);
    CHECK((id.entries - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);

    // Off-diagonal leakage is O(eps), so the max deviation from identity
    // should shrink roughly linearly over eps = 1e-2, 1e-3, 1e-4.
    double prev = 0.0;
    int k = 0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      double dev = (overlap_matrix(Perturbation(eps), 16).entries -
                    Eigen::MatrixXd::Identity(16, 16))
                       .cwiseAbs()
                       .maxCoeff();
      if (k++ > 0) {
        CHECK(dev < prev);
        CHECK(prev / dev == doctest::Approx(10.0).epsilon(0.5));
      }
      prev = dev;
    }
  }

  TEST_CASE("columns are orthonormal well inside the truncation") {
    OverlapMatrix r = overlap_matrix(Perturbation(0.1), 48);
    for (int kcol = 0; kcol < 16; ++kcol)
      for (int n = kcol; n < 16; ++n) {
        double dot = r.entries.col(kcol).dot(r.entries.col(n));
        double expect = (kcol == n) ? 1.0 : 0.0;
        CHECK(std::abs(dot - expect) <= 1e-10);
      }
  }

  TEST_CASE("diagonal 2x2 block values") {
    Perturbation p(0.1);
    OverlapMatrix r = overlap_matrix(p, 2);
    CHECK(r.entries(0, 0) == doctest::Approx(std::sqrt(p.q())).epsilon(1e-14));
    CHECK(r.entries(1, 1) ==
          doctest::Approx(std::pow(p.q(), 1.5)).epsilon(1e-14));
    CHECK(r.entries(0, 1) == 0.0);
    CHECK(r.entries(1, 0) == 0.0);
  }
}

TEST_SUITE("states") {
  TEST_CASE("make_state normalizes and rejects the zero vector") {
    StateVector s = make_state(std::vector<cdouble>{{3.0, 0.0}, {0.0, 4.0}});
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(s.coeffs(0)) == doctest::Approx(0.6));
    CHECK_THROWS_AS(make_state(std::vector<cdouble>{{0.0, 0.0}}), std::invalid_argument);
  }

  TEST_CASE("already-normalized input is taken verbatim") {
    Eigen::VectorXcd v(3);
    v << cdouble(0.123456789012345678, 0.2), cdouble(0.5, -0.25), cdouble(0.0, 0.0);
    v /= v.norm();
    StateVector s = make_state(v);
    CHECK(s.coeffs(0) == v(0));  // bitwise: no renormalization applied
    CHECK(s.coeffs(1) == v(1));
  }

  TEST_CASE("fock and on constructors") {
    StateVector f3 = make_fock(3, 8);
    CHECK(f3.coeffs(3) == cdouble(1.0, 0.0));
    CHECK(f3.top_occupied() == 3);
    CHECK_THROWS_AS(make_fock(3, 3), std::invalid_argument);

    StateVector on3 = make_on(3, 0.0, 4);
    CHECK(on3.coeffs(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(on3.coeffs(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(on3.coeffs(1) == cdouble(0.0, 0.0));

    StateVector on1 = make_on(1, M_PI, 4);
    CHECK(std::abs(on1.coeffs(1) - cdouble(-1.0 / std::sqrt(2.0), 0.0)) <= 1e-15);

    StateVector on4 = make_on(4, 0.0, 8);
    CHECK(on4.coeffs(4).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  }

  TEST_CASE("coherent state amplitudes and tail policing") {
    StateVector c1 = make_coherent(1.0, 1e-12, 64);
    CHECK(c1.coeffs(0).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
    CHECK(c1.norm() == doctest::Approx(1.0).epsilon(1e-14));

    // Independent Poisson-tail check: eight levels cannot hold alpha = 2 at
    // a 1e-12 tail (the tail beyond n=7 is ~5.1e-2), so this must throw.
    CHECK(oracles::poisson_tail(4.0, 8) > 1e-12);
    CHECK_THROWS_AS(make_coherent(2.0, 1e-12, 8), std::invalid_argument);

    StateVector vac = make_coherent(0.0, 1e-12, 4);
    CHECK(vac.dim() == 1);
    CHECK(vac.coeffs(0) == cdouble(1.0, 0.0));

    // Mean occupation follows alpha^2 (spec uses alpha = sqrt(3/2)).
    StateVector ch = make_coherent(1.2247, 1e-12, 64);
    CHECK(mean_quanta(ch) == doctest::Approx(1.2247 * 1.2247).epsilon(1e-10));
    CHECK(mean_quanta(ch) == doctest::Approx(1.5).epsilon(2e-4));
    CHECK(quanta_variance(ch) == doctest::Approx(1.2247 * 1.2247).epsilon(1e-9));
  }
}

TEST_SUITE("evolution") {
  TEST_CASE("free evolution applies e^{-i tau (n+1/2)}") {
    StateVector s = make_on(3, 0.0, 4);
    StateVector e = evolve_free(s, 1.3);
    CHECK(std::abs(e.coeffs(0) - std::polar(1.0 / std::sqrt(2.0), -0.65)) <= 1e-15);
    CHECK(std::abs(e.coeffs(3) - std::polar(1.0 / std::sqrt(2.0), -1.3 * 3.5)) <= 1e-15);
  }

  TEST_CASE("perturbed-frame evolution at eps = 0 is free evolution") {
    Perturbation none(0.0);
    StateVector v0 = evolve_in_perturbed_frame(make_fock(0, 1), 2.0, none);
    CHECK(std::abs(v0.coeffs(0) - std::polar(1.0, -1.0)) <= 1e-12);

    // A full period multiplies every Fock state by e^{-i pi (2n+1)} = -1.
    for (int n : {0, 1, 4}) {
      StateVector vn = evolve_in_perturbed_frame(make_fock(n, n + 1), 2.0 * M_PI, none);
      CHECK(std::abs(vn.coeffs(n) - cdouble(-1.0, 0.0)) <= 1e-12);
      for (int k = 0; k < vn.dim(); ++k)
        if (k != n) CHECK(std::abs(vn.coeffs(k)) <= 1e-12);
    }
  }

  TEST_CASE("norm survives truncation and the working dim follows the rule") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    Eigen::VectorXcd raw(8);
    for (int i = 0; i < 8; ++i) raw(i) = cdouble(g(rng), g(rng));
    StateVector s = make_state(raw);

    Perturbation p(1e-3);
    StateVector out = evolve_in_perturbed_frame(s, 7.0, p);
    CHECK(std::abs(1.0 - out.coeffs.squaredNorm()) <= 1e-10);
    CHECK(out.dim() == evolution_working_dim(s.top_occupied(), s.dim(), 1e-3));
  }

  TEST_CASE("evolution is unitary on the retained block") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    auto rand_state = [&] {
      Eigen::VectorXcd raw(6);
      for (int i = 0; i < 6; ++i) raw(i) = cdouble(g(rng), g(rng));
      return make_state(raw);
    };
    Perturbation p(5e-3);
    for (int trial = 0; trial < 4; ++trial) {
      StateVector a = rand_state(), b = rand_state();
      cdouble before = inner_product(a, b);
      cdouble after = inner_product(evolve_in_perturbed_frame(a, 3.7, p),
                                    evolve_in_perturbed_frame(b, 3.7, p));
      CHECK(std::abs(before - after) <= 1e-10);
    }
  }

  TEST_CASE("propagator matrix matches the vector path") {
    Perturbation p(2e-3);
    StateVector s = make_on(3, 0.7, 4);
    StateVector via_vec = evolve_in_perturbed_frame(s, 2.1, p);
    Eigen::MatrixXcd v = perturbed_propagator(p, 2.1, via_vec.dim());
    Eigen::VectorXcd embedded = Eigen::VectorXcd::Zero(via_vec.dim());
    embedded.head(4) = s.coeffs;
    CHECK((v * embedded - via_vec.coeffs).norm() <= 1e-12);
  }
}
