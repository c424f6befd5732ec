#pragma once

#include <string>

#include "ddmpc/sim.hpp"

namespace ddmpc {

// Plan polyline, driven path, obstacles with their keep-out rings, start and
// goal markers. Pure text output: identical inputs give identical bytes.
std::string trajectory_svg(const Scenario& scn, const TrajectoryLog& log);

}  // namespace ddmpc
