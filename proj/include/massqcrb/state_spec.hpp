#pragma once

#include <string>

#include "massqcrb/state.hpp"

namespace massqcrb {

// Builds a state from a compact text description:
//
//   fock:<n>          |n>
//   on:<L>[:<phi>]    (|0> + e^{i phi}|L>)/sqrt(2), phi defaults to 0
//   cat1:<n>          (|n> + |n+2>)/sqrt(2)
//   cat2:<n>          (|n> + |n+4>)/sqrt(2)
//   coherent:<alpha>  coherent state of real amplitude alpha
//   custom:<path>     JSON file {"coeffs": [[re, im], ...]}
//
// A malformed description throws std::invalid_argument naming the offending
// token; an unreadable file throws std::runtime_error.
StateVector parse_state(const std::string& spec);

// The JSON document parse_state accepts under custom:, with every
// coefficient printed to 17 significant digits so a reload is bit-exact.
std::string state_to_json(const StateVector& state);

// Writes state_to_json to `path` atomically (temp file + rename).
void save_state(const StateVector& state, const std::string& path);

}  // namespace massqcrb
