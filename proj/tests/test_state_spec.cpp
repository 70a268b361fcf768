#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "massqcrb/state.hpp"
#include "massqcrb/state_spec.hpp"

using massqcrb::StateVector;
using massqcrb::cdouble;

namespace {

std::filesystem::path scratch_file(const char* stem) {
  return std::filesystem::temp_directory_path() /
         (std::string(stem) + "." + std::to_string(::getpid()) + ".json");
}

}  // namespace

TEST_SUITE("state descriptions") {
  TEST_CASE("fock grammar builds the bare level") {
    const StateVector s = massqcrb::parse_state("fock:3");
    REQUIRE(s.dim() == 4);
    CHECK(s.coeffs(3) == cdouble(1.0, 0.0));
    CHECK(s.coeffs(0) == cdouble(0.0, 0.0));
    CHECK(massqcrb::parse_state("fock:0").dim() == 1);
  }

  TEST_CASE("two-level grammar with optional phase") {
    const StateVector plain = massqcrb::parse_state("on:3");
    REQUIRE(plain.dim() == 4);
    CHECK(plain.coeffs(0).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(plain.coeffs(3).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(plain.coeffs(1) == cdouble(0.0, 0.0));

    const StateVector turned = massqcrb::parse_state("on:4:0.7");
    REQUIRE(turned.dim() == 5);
    const cdouble expected = M_SQRT1_2 * std::exp(cdouble(0.0, 0.7));
    CHECK(std::abs(turned.coeffs(4) - expected) < 1e-15);
  }

  TEST_CASE("superposition grammars with gaps two and four") {
    const StateVector two = massqcrb::parse_state("cat1:2");
    REQUIRE(two.dim() == 5);
    CHECK(two.coeffs(2).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(two.coeffs(4).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-15));

    const StateVector four = massqcrb::parse_state("cat2:1");
    REQUIRE(four.dim() == 6);
    CHECK(four.coeffs(1).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(four.coeffs(5).real() == doctest::Approx(M_SQRT1_2).epsilon(1e-15));
    CHECK(four.coeffs(3) == cdouble(0.0, 0.0));
  }

  TEST_CASE("coherent grammar hits the requested excitation") {
    const StateVector s = massqcrb::parse_state("coherent:1.2247");
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(massqcrb::mean_quanta(s) ==
          doctest::Approx(1.2247 * 1.2247).epsilon(1e-9));
    // the amplitude was picked to carry three halves of a quantum on average
    CHECK(massqcrb::mean_quanta(s) == doctest::Approx(1.5).epsilon(2e-4));
  }

  TEST_CASE("malformed descriptions name the offending token") {
    using doctest::Contains;
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("fock"),
                         Contains("wrong argument count"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("fock:x"), Contains("'x'"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("fock:3:4"),
                         Contains("wrong argument count"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("blah:3"), Contains("blah"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("on:0"),
                         Contains("level >= 1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("coherent:-2"),
                         Contains("amplitude"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("fock:-1"),
                         Contains("negative"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state("custom:"),
                         Contains("missing file path"), std::invalid_argument);
    CHECK_THROWS_AS(massqcrb::parse_state(""), std::invalid_argument);
  }

  TEST_CASE("unreadable custom file is an i/o error") {
    CHECK_THROWS_WITH_AS(
        massqcrb::parse_state("custom:/nonexistent/dir/state.json"),
        doctest::Contains("/nonexistent/dir/state.json"), std::runtime_error);
  }

  TEST_CASE("broken custom files are rejected") {
    const auto path = scratch_file("massqcrb_badstate");
    auto feed = [&](const char* text) {
      std::ofstream(path) << text;
      return std::string("custom:") + path.string();
    };
    CHECK_THROWS_AS(massqcrb::parse_state(feed("not json at all")),
                    std::invalid_argument);
    CHECK_THROWS_AS(massqcrb::parse_state(feed("{\"nope\": 1}")),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(massqcrb::parse_state(feed("{\"coeffs\": [[1]]}")),
                         doctest::Contains("pair"), std::invalid_argument);
    CHECK_THROWS_AS(massqcrb::parse_state(feed("{\"coeffs\": []}")),
                    std::invalid_argument);
    std::filesystem::remove(path);
  }

  TEST_CASE("saved states reload bit-exactly") {
    std::mt19937_64 rng(20240817);
    std::normal_distribution<double> gauss;
    std::vector<cdouble> raw(6);
    for (auto& c : raw) c = cdouble(gauss(rng), gauss(rng));
    const StateVector original = massqcrb::make_state(raw);

    const auto path = scratch_file("massqcrb_roundtrip");
    massqcrb::save_state(original, path.string());
    const StateVector reloaded =
        massqcrb::parse_state("custom:" + path.string());

    REQUIRE(reloaded.dim() == original.dim());
    for (int n = 0; n < original.dim(); ++n)
      CHECK(reloaded.coeffs(n) == original.coeffs(n));
    std::filesystem::remove(path);
  }

  TEST_CASE("serialized text carries full precision") {
    // 0.36 + 0.64 is exactly 1, so the coefficients are stored verbatim and
    // 0.6 must appear with all seventeen significant digits.
    const StateVector s =
        massqcrb::make_state(std::vector<cdouble>{{0.6, 0.0}, {0.0, 0.8}});
    const std::string text = massqcrb::state_to_json(s);
    CHECK(text.find("0.59999999999999998") != std::string::npos);
    CHECK(text.find("0.80000000000000004") != std::string::npos);
    CHECK(text.find("\"coeffs\"") != std::string::npos);
  }
}
