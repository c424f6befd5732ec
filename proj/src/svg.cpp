#include "ddmpc/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace ddmpc {

namespace {

struct Box {
  double min_x{0.0};
  double min_y{0.0};
  double max_x{0.0};
  double max_y{0.0};
  bool seeded{false};

  void grow(double x, double y, double r = 0.0) {
    if (!seeded) {
      min_x = x - r;
      max_x = x + r;
      min_y = y - r;
      max_y = y + r;
      seeded = true;
      return;
    }
    min_x = std::min(min_x, x - r);
    max_x = std::max(max_x, x + r);
    min_y = std::min(min_y, y - r);
    max_y = std::max(max_y, y + r);
  }
};

// Fixed two-decimal pixels keep the file small and the bytes reproducible.
std::string px(double v) {
  std::array<char, 32> buf;
  auto [p, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v,
                    std::chars_format::fixed, 2);
  return std::string(buf.data(), p);
}

struct Mapper {
  double scale;
  double min_x;
  double max_y;
  double pad;

  double x(double wx) const { return (wx - min_x) * scale + pad; }
  double y(double wy) const { return (max_y - wy) * scale + pad; }
};

void polyline(std::string& out, const Mapper& m,
              const std::vector<Pose>& pts, const char* style) {
  if (pts.empty()) return;
  out += "  <polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += px(m.x(pts[i].x)) + "," + px(m.y(pts[i].y));
  }
  out += "\" ";
  out += style;
  out += "/>\n";
}

void circle(std::string& out, const Mapper& m, double wx, double wy,
            double r_px, const char* style) {
  out += "  <circle cx=\"" + px(m.x(wx)) + "\" cy=\"" + px(m.y(wy)) +
         "\" r=\"" + px(r_px) + "\" ";
  out += style;
  out += "/>\n";
}

void heading_tick(std::string& out, const Mapper& m, const Pose& p,
                  double len_w, const char* style) {
  const double tx = p.x + len_w * std::cos(p.theta);
  const double ty = p.y + len_w * std::sin(p.theta);
  out += "  <line x1=\"" + px(m.x(p.x)) + "\" y1=\"" + px(m.y(p.y)) +
         "\" x2=\"" + px(m.x(tx)) + "\" y2=\"" + px(m.y(ty)) + "\" ";
  out += style;
  out += "/>\n";
}

}  // namespace

std::string trajectory_svg(const Scenario& scn, const TrajectoryLog& log) {
  Box box;
  box.grow(scn.start.x, scn.start.y);
  for (const Pose& w : scn.plan.waypoints) box.grow(w.x, w.y);
  for (const LogRow& r : log.rows) box.grow(r.true_pose.x, r.true_pose.y);
  const OcpSpec spec = scn.make_ocp_spec();
  for (const Obstacle& ob : scn.obstacles) {
    box.grow(ob.x, ob.y, spec.keepout_radius(ob));
  }

  const double span_x = std::max(box.max_x - box.min_x, 0.5);
  const double span_y = std::max(box.max_y - box.min_y, 0.5);
  const double pad = 24.0;
  const double width = 720.0;
  const double scale = (width - 2.0 * pad) / span_x;
  const double height = span_y * scale + 2.0 * pad;
  const Mapper m{scale, box.min_x, box.max_y, pad};
  const double tick_w = 0.08 * std::max(span_x, span_y);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) +
         "\" height=\"" + px(height) + "\" viewBox=\"0 0 " + px(width) + " " +
         px(height) + "\">\n";
  out += "  <title>" + scn.name + "</title>\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  for (const Obstacle& ob : scn.obstacles) {
    circle(out, m, ob.x, ob.y, spec.keepout_radius(ob) * scale,
           "fill=\"none\" stroke=\"#d93025\" stroke-dasharray=\"4 3\"");
    circle(out, m, ob.x, ob.y, std::max(ob.radius * scale, 1.5),
           "fill=\"#5f6368\"");
  }

  polyline(out, m, scn.plan.waypoints,
           "fill=\"none\" stroke=\"#9aa0a6\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6 4\"");
  for (const Pose& w : scn.plan.waypoints) {
    circle(out, m, w.x, w.y, 3.0,
           "fill=\"none\" stroke=\"#9aa0a6\" stroke-width=\"1.5\"");
  }

  std::vector<Pose> path;
  path.reserve(log.rows.size());
  for (const LogRow& r : log.rows) path.push_back(r.true_pose);
  polyline(out, m, path,
           "fill=\"none\" stroke=\"#1a73e8\" stroke-width=\"2\"");

  circle(out, m, scn.start.x, scn.start.y, 4.0, "fill=\"#188038\"");
  heading_tick(out, m, scn.start, tick_w,
               "stroke=\"#188038\" stroke-width=\"2\"");
  if (!scn.plan.waypoints.empty()) {
    const Pose& goal = scn.plan.waypoints.back();
    circle(out, m, goal.x, goal.y, 4.0,
           "fill=\"none\" stroke=\"#d93025\" stroke-width=\"2\"");
    heading_tick(out, m, goal, tick_w,
                 "stroke=\"#d93025\" stroke-width=\"2\"");
  }
  if (!path.empty()) {
    circle(out, m, path.back().x, path.back().y, 3.0, "fill=\"#1a73e8\"");
    heading_tick(out, m, path.back(), tick_w,
                 "stroke=\"#1a73e8\" stroke-width=\"2\"");
  }

  out += "</svg>\n";
  return out;
}

}  // namespace ddmpc
