#pragma once

#include <string>

#include <json.hpp>

#include "otm/interferometry.hpp"

namespace otm {

// Key order in emitted documents is fixed (insertion order), so identical
// inputs serialize to identical bytes.
using Json = nlohmann::ordered_json;

// ------------------------------------------------------- matrix encoding ----
//
// A matrix is an array of rows; every entry is a 2-array [re, im].

Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);  // full precision (round-trip exact)

// ----------------------------------------------------------- SystemSpec ----
//
// {"beta": float, "h0": matrix, "h_tau": matrix,
//  "u": matrix | {"generator": matrix, "time": float},   (U = exp(-i K t))
//  "initial_basis": matrix of columns (optional),
//  "preset": name (optional)}
//
// A "preset" key seeds every field; explicit keys then override it.
// Known preset: "paper-2qubit" (see preset_two_qubit_quench).

SystemSpec spec_from_json(const Json& j);

// Canonical form: beta + explicit matrices (generator input is canonicalized
// to its unitary).  Parsing the output reproduces the spec exactly.
Json spec_to_json(const SystemSpec& spec);

// ----------------------------------------------------------- NoiseModel ----
//
// {"depol_1q": float, "depol_ctrl": float,
//  "readout_p01": float, "readout_p10": float};  absent fields read as 0.

NoiseModel noise_from_json(const Json& j);
Json noise_to_json(const NoiseModel& noise);

// -------------------------------------------------------- report numbers ----

// Reports and CSV round every value to 9 significant digits so repeated runs
// diff cleanly; configs are never rounded.
std::string fmt_sig9(double v);

// The double that fmt_sig9's text parses back to (what reports store).
double round_sig9(double v);

}  // namespace otm
