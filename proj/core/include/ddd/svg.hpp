// Orthographic SVG snapshots of a network.
#pragma once

#include <string>

#include "ddd/geometry.hpp"

namespace ddd {

// plane: "xy", "yz" or "xz". One closed <path> per loop, colored by a hash of
// its Burgers vector, plus a bar of length eps. Throws InvalidArgument for an
// empty network or an unknown plane.
std::string svg_string(const DislocationNetwork& S, const std::string& plane = "xy");
void render_svg(const DislocationNetwork& S, const std::string& plane, const std::string& path);

}  // namespace ddd
