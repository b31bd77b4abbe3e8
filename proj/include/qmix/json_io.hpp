#ifndef QMIX_JSON_IO_HPP_
#define QMIX_JSON_IO_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmix/search.hpp"
#include "qmix/state.hpp"

namespace qmix {

/// Malformed file or schema violation (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Single state: {"dim": d, "coeffs": [...]} or
/// {"dim": d, "matrix": [[{"re":..,"im":..}, ...], ...]}.
CoeffVector state_from_json(const nlohmann::json& j);

/// State set: {"dim": d, "states": [state...], "labels": [...]?}.
StateSet state_set_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const CoeffVector& v);
nlohmann::json state_set_to_json(const StateSet& s);

CoeffVector load_state(const std::string& path);
StateSet load_state_set(const std::string& path);

/// CSV rows k,distance,minimal_n,support,weights with 12 significant digits;
/// support and weights are semicolon-joined lists.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& is);

/// "%.12g" formatting used for all CSV numbers.
std::string format_number(double x);

}  // namespace qmix

#endif  // QMIX_JSON_IO_HPP_
