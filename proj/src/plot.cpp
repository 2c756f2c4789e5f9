#include "irmplan/plot.hpp"

#include "irmplan/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace irmplan {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

// Fixed two-decimal formatting, independent of the C locale.
std::string f2(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;

  void add(double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
  bool empty() const { return !(x0 <= x1); }
};

// Maps a world box into a pixel rectangle with equal axis scales, y up.
class Panel {
 public:
  Panel(Bounds b, double left, double top, double width, double height) : left_(left), top_(top), h_(height) {
    if (b.empty()) b = {-1, -1, 1, 1};
    const double pad = 0.05 * std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-3});
    b.x0 -= pad;
    b.y0 -= pad;
    b.x1 += pad;
    b.y1 += pad;
    scale_ = std::min(width / (b.x1 - b.x0), height / (b.y1 - b.y0));
    ox_ = b.x0 - 0.5 * (width / scale_ - (b.x1 - b.x0));
    oy_ = b.y0 - 0.5 * (height / scale_ - (b.y1 - b.y0));
  }

  std::string px(double x) const { return f2(left_ + (x - ox_) * scale_); }
  std::string py(double y) const { return f2(top_ + h_ - (y - oy_) * scale_); }

 private:
  double left_, top_, h_;
  double scale_ = 1.0, ox_ = 0.0, oy_ = 0.0;
};

class Svg {
 public:
  Svg(int width, int height) {
    out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void dot(const Panel& p, double x, double y, double r, const char* fill) {
    out_ += "<circle cx=\"" + p.px(x) + "\" cy=\"" + p.py(y) + "\" r=\"" + f2(r) + "\" fill=\"" + fill + "\"/>\n";
  }

  void polyline(const Panel& p, const std::vector<BaseConfig>& pts, const char* stroke, double width,
                const char* extra = "") {
    if (pts.empty()) return;
    out_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) + "\" stroke-width=\"" + f2(width) + "\"" + extra +
            " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) out_ += (i ? " " : "") + p.px(pts[i].x) + "," + p.py(pts[i].y);
    out_ += "\"/>\n";
  }

  void polygon(const Panel& p, const ConvexRegion& r, const char* stroke, const char* fill, const char* extra = "") {
    out_ += "<polygon stroke=\"" + std::string(stroke) + "\" fill=\"" + fill + "\" stroke-width=\"1.5\"" + extra + " points=\"";
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
      out_ += (i ? " " : "") + p.px(r.vertices[i].x) + "," + p.py(r.vertices[i].y);
    }
    out_ += "\"/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 14, const char* anchor = "start") {
    out_ += "<text x=\"" + f2(x) + "\" y=\"" + f2(y) + "\" font-family=\"sans-serif\" font-size=\"" +
            std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  }

  void raw(const std::string& s) { out_ += s; }

  std::string finish() { return out_ + "</svg>\n"; }

 private:
  std::string out_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IOError("failed writing " + path.string());
}

}  // namespace

std::string svg_graph(const LayeredGraph& graph, const std::vector<BaseConfig>& path) {
  Bounds b;
  std::size_t total = 0;
  for (const auto& layer : graph.layers) {
    total += layer.candidates.size();
    for (const auto& c : layer.candidates) b.add(c.x, c.y);
    b.add(layer.target.x, layer.target.y);
  }
  b.add(graph.start.x, graph.start.y);
  const std::size_t stride = std::max<std::size_t>(1, (total + 5999) / 6000);

  Svg svg(800, 640);
  Panel p(b, 20, 40, 760, 580);
  svg.text(400, 24, "Layered graph: candidates and discrete base path", 16, "middle");
  std::size_t k = 0;
  for (std::size_t i = 0; i < graph.layers.size(); ++i) {
    for (const auto& c : graph.layers[i].candidates) {
      if (k++ % stride == 0) svg.dot(p, c.x, c.y, 1.2, kPalette[i % kPalette.size()]);
    }
  }
  std::vector<BaseConfig> targets;
  for (const auto& layer : graph.layers) targets.push_back({layer.target.x, layer.target.y});
  svg.polyline(p, targets, "#555555", 1.5, " stroke-dasharray=\"4 3\"");
  svg.polyline(p, path, "black", 2.5);
  for (const auto& n : path) svg.dot(p, n.x, n.y, 3.0, "black");
  svg.dot(p, graph.start.x, graph.start.y, 5.0, "#d62728");
  svg.text(30, 630, "dashed: end-effector waypoints   black: base path   red: start", 12);
  return svg.finish();
}

std::string svg_regions(const RegionTrace* trace, std::size_t layer_index) {
  Svg svg(1000, 300);
  svg.text(500, 22, "Region extraction, layer " + std::to_string(layer_index), 16, "middle");
  const std::array<const char*, 4> titles{"input points", "filtered", "clusters", "convex regions"};
  Bounds b;
  if (trace) {
    for (const auto& pt : trace->initial) b.add(pt.x, pt.y);
  }
  for (int k = 0; k < 4; ++k) {
    const double left = 10 + 247.5 * k;
    svg.raw("<rect x=\"" + f2(left) + "\" y=\"40\" width=\"237.50\" height=\"250\" fill=\"none\" stroke=\"#cccccc\"/>\n");
    svg.text(left + 118.75, 58, titles[static_cast<std::size_t>(k)], 13, "middle");
    const Panel p(b, left + 5, 65, 227.5, 220);
    if (!trace) {
      svg.text(left + 118.75, 170, "pinned", 16, "middle");
      continue;
    }
    switch (k) {
      case 0:
        for (const auto& pt : trace->initial) svg.dot(p, pt.x, pt.y, 1.2, "#555555");
        break;
      case 1:
        for (const auto& pt : trace->filtered) svg.dot(p, pt.x, pt.y, 1.2, "#555555");
        break;
      case 2:
        for (std::size_t c = 0; c < trace->clusters.size(); ++c) {
          for (const auto& pt : trace->clusters[c]) svg.dot(p, pt.x, pt.y, 1.2, kPalette[c % kPalette.size()]);
        }
        for (const auto& h : trace->holed_hulls) svg.polygon(p, h, "#d62728", "none", " stroke-dasharray=\"5 3\"");
        break;
      default:
        for (std::size_t r = 0; r < trace->accepted.size(); ++r) {
          const char* color = kPalette[r % kPalette.size()];
          svg.polygon(p, trace->accepted[r], color, color, " fill-opacity=\"0.25\"");
        }
        if (trace->accepted.empty()) svg.text(left + 118.75, 170, "pinned", 16, "middle");
    }
  }
  return svg.finish();
}

std::string svg_refinement(const std::vector<BaseConfig>& discrete, const std::vector<BaseConfig>& refined,
                           const std::vector<RegionSet>& regions) {
  Bounds b;
  for (const auto& n : discrete) b.add(n.x, n.y);
  for (const auto& n : refined) b.add(n.x, n.y);
  Svg svg(800, 640);
  Panel p(b, 20, 40, 760, 580);
  svg.text(400, 24, "Base path before and after refinement", 16, "middle");
  for (const auto& set : regions) {
    for (const auto& r : set.regions) svg.polygon(p, r, "#bbbbbb", "none", " stroke-opacity=\"0.5\"");
  }
  svg.polyline(p, discrete, "#d62728", 2.0);
  for (const auto& n : discrete) svg.dot(p, n.x, n.y, 2.5, "#d62728");
  svg.polyline(p, refined, "#1f77b4", 2.0);
  for (const auto& n : refined) svg.dot(p, n.x, n.y, 2.5, "#1f77b4");
  svg.text(30, 630, "red: discrete   blue: refined   grey: feasible regions", 12);
  return svg.finish();
}

std::string svg_rm_slice(const ReachabilityMap& rm) {
  const double d = rm.grid.delta_p;
  const int z0 = translational_bin(0.0, d);
  std::map<std::pair<int, int>, double> best;
  for (const auto& v : rm.voxels) {
    if (v.bin[2] != z0) continue;
    auto [it, fresh] = best.try_emplace({v.bin[0], v.bin[1]}, v.mu);
    if (!fresh) it->second = std::max(it->second, v.mu);
  }
  double mu_max = 0.0;
  for (const auto& [cell, mu] : best) mu_max = std::max(mu_max, mu);
  const double r = rm.grid.radius;
  Bounds b;
  b.add(-r, -r);
  b.add(r, r);
  Svg svg(640, 680);
  Panel p(b, 20, 40, 600, 600);
  svg.text(320, 24, "Reachability slice at the base height (" + rm.arm_id + ")", 16, "middle");
  const std::string side = f2(d * 600.0 / (2.2 * r));
  for (const auto& [cell, mu] : best) {
    const double shade = mu_max > 0.0 ? mu / mu_max : 0.0;
    const int red = static_cast<int>(std::lround(255 * (1.0 - shade)));
    const int blue = static_cast<int>(std::lround(255 * shade));
    const double x = translational_center(cell.first, d) - 0.5 * d;
    const double y = translational_center(cell.second, d) + 0.5 * d;
    svg.raw("<rect x=\"" + p.px(x) + "\" y=\"" + p.py(y) + "\" width=\"" + side + "\" height=\"" + side +
            "\" fill=\"rgb(" + std::to_string(red) + ",80," + std::to_string(blue) + ")\"/>\n");
  }
  svg.text(30, 665, "cell color: red = low manipulability, blue = high (max " + f2(mu_max) + ")", 12);
  return svg.finish();
}

std::string svg_cost(const std::vector<double>& cost_trace) {
  Svg svg(640, 400);
  svg.text(320, 24, "Refinement objective per iteration", 16, "middle");
  const double left = 70, top = 40, width = 540, height = 310;
  svg.raw("<rect x=\"70.00\" y=\"40.00\" width=\"540.00\" height=\"310.00\" fill=\"none\" stroke=\"#999999\"/>\n");
  if (cost_trace.empty()) return svg.finish();
  const auto [lo_it, hi_it] = std::minmax_element(cost_trace.begin(), cost_trace.end());
  const double lo = *lo_it, span = std::max(*hi_it - lo, 1e-12);
  const double steps = std::max<double>(1.0, static_cast<double>(cost_trace.size() - 1));
  std::string pts;
  for (std::size_t i = 0; i < cost_trace.size(); ++i) {
    const double x = left + width * static_cast<double>(i) / steps;
    const double y = top + height * (1.0 - (cost_trace[i] - lo) / span);
    pts += (i ? " " : "") + f2(x) + "," + f2(y);
  }
  svg.raw("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2.00\" points=\"" + pts + "\"/>\n");
  svg.text(left - 6, top + 5, f2(*hi_it), 11, "end");
  svg.text(left - 6, top + height, f2(lo), 11, "end");
  svg.text(left, top + height + 20, "0", 11, "middle");
  svg.text(left + width, top + height + 20, std::to_string(cost_trace.size() - 1), 11, "middle");
  svg.text(left + width / 2, top + height + 40, "iteration", 12, "middle");
  return svg.finish();
}

std::vector<std::filesystem::path> emit_plots(const PlotInputs& in, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IOError("cannot create " + out_dir.string() + ": " + ec.message());

  std::size_t layer = in.graph.layers.empty() ? 0 : in.graph.layers.size() / 2;
  if (in.region_layer) {
    layer = *in.region_layer;
  } else {
    for (std::size_t i = 0; i < in.traces.size(); ++i) {
      if (!in.traces[i].holed_hulls.empty()) {
        layer = i;
        break;
      }
    }
  }
  const RegionTrace* trace = layer < in.traces.size() ? &in.traces[layer] : nullptr;
  if (trace && trace->accepted.empty()) trace = nullptr;

  const std::vector<std::pair<std::string, std::string>> files{
      {"graph.svg", svg_graph(in.graph, in.discrete)},
      {"regions.svg", svg_regions(trace, layer)},
      {"refinement.svg", svg_refinement(in.discrete, in.refined, in.regions)},
      {"cost.svg", svg_cost(in.cost_trace)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    written.push_back(out_dir / name);
    write_text(written.back(), text);
  }
  return written;
}

}  // namespace irmplan
