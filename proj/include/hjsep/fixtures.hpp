#pragma once

// Shipped example problems: a two-degree-of-freedom time-dependent system
// with cubic potential terms whose candidate tensor certifies separability,
// the coordinate change that diagonalizes it, and two negative controls
// (a torsion-breaking tensor entry and a perturbed potential coefficient).

#include <string>
#include <vector>

namespace hjsep {

// Writes the named fixture family into `directory` and returns the paths
// written.  Throws std::runtime_error for unknown names or unwritable
// directories.
std::vector<std::string> emit_fixture(const std::string& name, const std::string& directory);

// Names accepted by emit_fixture.
std::vector<std::string> fixture_names();

}  // namespace hjsep
