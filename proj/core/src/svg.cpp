#include "ddd/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <limits>

#include "ddd/error.hpp"
#include "ddd/io.hpp"

namespace ddd {

namespace {

std::string color_for(const std::array<int, 3>& n) {
  // FNV-1a over the lattice coordinates.
  std::uint32_t h = 2166136261u;
  for (int c : n) {
    h ^= static_cast<std::uint32_t>(c + 1024);
    h *= 16777619u;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "hsl(%u,70%%,40%%)", h % 360u);
  return buf;
}

}  // namespace

std::string svg_string(const DislocationNetwork& S, const std::string& plane) {
  if (S.empty()) throw InvalidArgument("render: empty network");
  int ax = 0, ay = 1;
  if (plane == "yz") {
    ax = 1;
    ay = 2;
  } else if (plane == "xz") {
    ax = 0;
    ay = 2;
  } else if (plane != "xy") {
    throw InvalidArgument("render: plane must be xy, yz or xz");
  }
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& l : S.loops)
    for (const auto& p : l.nodes) {
      x0 = std::min(x0, p[ax]);
      x1 = std::max(x1, p[ax]);
      y0 = std::min(y0, p[ay]);
      y1 = std::max(y1, p[ay]);
    }
  const double margin = std::max({0.05 * (x1 - x0), 0.05 * (y1 - y0), 2.0 * S.epsilon});
  x0 -= margin;
  y0 -= margin;
  x1 += margin;
  y1 += margin;
  const double w = x1 - x0, h = y1 - y0;
  const double stroke = 0.003 * std::max(w, h);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + format_double(x0) + " " + format_double(-y1) + " " +
         format_double(w) + " " + format_double(h) + "\">\n";
  for (const auto& l : S.loops) {
    out += "<path fill=\"none\" stroke=\"" + color_for(l.burgers.lattice_coords) + "\" stroke-width=\"" +
           format_double(stroke) + "\" d=\"";
    for (std::size_t k = 0; k < l.size(); ++k) {
      out += (k ? " L " : "M ") + format_double(l.nodes[k][ax]) + " " + format_double(-l.nodes[k][ay]);
    }
    out += " Z\"/>\n";
  }
  // Scale bar of length eps in the lower-left corner.
  const double bx = x0 + 0.5 * margin, by = -(y0 + 0.5 * margin);
  out += "<line class=\"scale\" x1=\"" + format_double(bx) + "\" y1=\"" + format_double(by) + "\" x2=\"" +
         format_double(bx + S.epsilon) + "\" y2=\"" + format_double(by) + "\" stroke=\"black\" stroke-width=\"" +
         format_double(2.0 * stroke) + "\"/>\n";
  out += "</svg>\n";
  return out;
}

void render_svg(const DislocationNetwork& S, const std::string& plane, const std::string& path) {
  write_file(path, svg_string(S, plane));
}

}  // namespace ddd
