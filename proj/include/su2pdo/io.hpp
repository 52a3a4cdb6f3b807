#pragma once

#include <stdexcept>

#include <json.hpp>

#include "su2pdo/opcatalog.hpp"

// JSON interchange: complex numbers as [re, im], half-integers as twice_* integers,
// matrices as arrays of rows. Doubles are written with round-trip precision.
namespace su2pdo::io {

using nlohmann::json;

// malformed or inconsistent input
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// a band limit or resource bound would be exceeded
struct BandLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json to_json(Complex z);
Complex complex_from_json(const json& j);
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, int n);

json to_json(const Coefficients& c);
Coefficients coefficients_from_json(const json& j);

// {"kind": "symbol", "left_invariant": true, "blocks": ...} or with "terms": [{coeff, base}]
json to_json(const Symbol& s);
Symbol symbol_from_json(const json& j);

// samples on build_grid(twice_L / 2), or {"constant": [re, im]}
json to_json(const GroupFunction& f);
GroupFunction function_from_json(const json& j, int default_twice_L = 0);

json to_json(const ClassFit& f);
json to_json(const HypoReport& r);
json to_json(const GHVerdict& v);
json to_json(const ParametrixResult& r);

json parse(const std::string& text);
json read_file(const std::string& path);

}  // namespace su2pdo::io
