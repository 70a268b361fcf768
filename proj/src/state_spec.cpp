#include "massqcrb/state_spec.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace massqcrb {

namespace {

[[noreturn]] void bad_spec(const std::string& spec, const std::string& why) {
  throw std::invalid_argument("state spec '" + spec + "': " + why);
}

std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(':', pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

int parse_level(const std::string& spec, const std::string& tok) {
  int value = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    bad_spec(spec, "bad integer '" + tok + "'");
  if (value < 0) bad_spec(spec, "negative level '" + tok + "'");
  return value;
}

double parse_real(const std::string& spec, const std::string& tok) {
  double value = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    bad_spec(spec, "bad number '" + tok + "'");
  return value;
}

StateVector two_level_superposition(int low, int high) {
  std::vector<cdouble> coeffs(high + 1, cdouble(0.0, 0.0));
  coeffs[low] = cdouble(M_SQRT1_2, 0.0);
  coeffs[high] = cdouble(M_SQRT1_2, 0.0);
  return make_state(coeffs);
}

StateVector load_custom(const std::string& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read state file '" + path +
                             "': " + std::strerror(errno));
  nlohmann::json doc;
  try {
    in >> doc;
    const auto& rows = doc.at("coeffs");
    if (!rows.is_array() || rows.empty())
      bad_spec(spec, "'coeffs' must be a non-empty array");
    std::vector<cdouble> coeffs;
    coeffs.reserve(rows.size());
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != 2)
        bad_spec(spec, "each coefficient must be a [re, im] pair");
      coeffs.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return make_state(coeffs);
  } catch (const nlohmann::json::exception& e) {
    bad_spec(spec, std::string("invalid state file: ") + e.what());
  }
}

}  // namespace

StateVector parse_state(const std::string& spec) {
  // The path may itself contain colons, so custom: keeps the tail intact.
  if (spec.rfind("custom:", 0) == 0) {
    const std::string path = spec.substr(7);
    if (path.empty()) bad_spec(spec, "missing file path");
    return load_custom(spec, path);
  }

  const auto fields = split_fields(spec);
  const std::string& kind = fields[0];
  const std::size_t args = fields.size() - 1;
  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (args < lo || args > hi)
      bad_spec(spec, "wrong argument count for '" + kind + "'");
  };

  if (kind == "fock") {
    expect(1, 1);
    const int n = parse_level(spec, fields[1]);
    return make_fock(n, n + 1);
  }
  if (kind == "on") {
    expect(1, 2);
    const int level = parse_level(spec, fields[1]);
    if (level < 1) bad_spec(spec, "'on' needs a level >= 1");
    const double phi = args == 2 ? parse_real(spec, fields[2]) : 0.0;
    return make_on(level, phi, level + 1);
  }
  if (kind == "cat1") {
    expect(1, 1);
    const int n = parse_level(spec, fields[1]);
    return two_level_superposition(n, n + 2);
  }
  if (kind == "cat2") {
    expect(1, 1);
    const int n = parse_level(spec, fields[1]);
    return two_level_superposition(n, n + 4);
  }
  if (kind == "coherent") {
    expect(1, 1);
    const double alpha = parse_real(spec, fields[1]);
    if (!(alpha >= 0.0)) bad_spec(spec, "amplitude must be >= 0");
    return make_coherent(alpha, 1e-12, 4096);
  }
  bad_spec(spec, "unknown kind '" + kind + "'");
}

std::string state_to_json(const StateVector& state) {
  std::ostringstream out;
  out << "{\"coeffs\": [";
  char buf[64];
  for (int n = 0; n < state.dim(); ++n) {
    if (n) out << ", ";
    std::snprintf(buf, sizeof(buf), "[%.17g, %.17g]", state.coeffs(n).real(),
                  state.coeffs(n).imag());
    out << buf;
  }
  out << "]}\n";
  return out.str();
}

void save_state(const StateVector& state, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out)
      throw std::runtime_error("cannot write state file '" + tmp +
                               "': " + std::strerror(errno));
    out << state_to_json(state);
    out.flush();
    if (!out) throw std::runtime_error("write failed on '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string why = std::strerror(errno);
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move '" + tmp + "' to '" + path +
                             "': " + why);
  }
}

}  // namespace massqcrb
