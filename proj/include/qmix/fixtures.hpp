#ifndef QMIX_FIXTURES_HPP_
#define QMIX_FIXTURES_HPP_

#include <string>
#include <utility>
#include <vector>

#include "qmix/state.hpp"

namespace qmix {

/// Built-in benchmark instance: a state set plus named interpolation
/// families r_o(k) = k * a + (1-k) * b.
struct Fixture {
  std::string name;
  StateSet set;
  std::vector<std::pair<std::string, TargetFamily>> variants;
  std::vector<std::string> notes;

  const TargetFamily& variant(const std::string& id) const;
};

/// The four embedded instances: example-i (d=2, N=3), example-ii (d=2, N=6),
/// example-iii (d=3, N=15), example-iv (d=4, N=20).
const std::vector<Fixture>& fixture_catalog();

const Fixture& find_fixture(const std::string& name);

}  // namespace qmix

#endif  // QMIX_FIXTURES_HPP_
