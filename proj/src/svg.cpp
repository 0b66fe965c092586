#include "resonance/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "resonance/rational.hpp"

namespace resonance {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string header() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string out = "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n";
  out += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(kWidth - 2 * kMargin) +
         "\" height=\"" + num(kHeight - 2 * kMargin) + "\"/>\n</g>\n";
  out += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight - 12) + "\">" + escape(xlabel) + "</text>\n";
  out += "<text x=\"8\" y=\"" + num(kHeight / 2) + "\">" + escape(ylabel) + "</text>\n";
  out += "<text x=\"" + num(kMargin) + "\" y=\"" + num(kHeight - kMargin + 16) + "\">" + num(f.x0) + "</text>\n";
  out += "<text x=\"" + num(kWidth - kMargin - 30) + "\" y=\"" + num(kHeight - kMargin + 16) + "\">" + num(f.x1) +
         "</text>\n";
  out += "<text x=\"4\" y=\"" + num(kHeight - kMargin) + "\">" + num(f.y0) + "</text>\n";
  out += "<text x=\"4\" y=\"" + num(kMargin + 4) + "\">" + num(f.y1) + "</text>\n</g>\n";
  return out;
}

std::string polyline(const Frame& f, const std::vector<Complex>& pts) {
  std::string out = "<polyline points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(f.px(pts[i].real())) + "," + num(f.py(pts[i].imag()));
  }
  return out + "\"/>\n";
}

}  // namespace

std::string polygon_svg(const NewtonPolygon& polygon) {
  double lmax = 1.0, nmax = 1.0;
  for (const auto& p : polygon.points) {
    lmax = std::max(lmax, to_double(p.lambda));
    nmax = std::max(nmax, to_double(p.nu));
  }
  const Frame f{0.0, lmax * 1.05, 0.0, nmax * 1.1};
  std::string out = header() + axes(f, "lambda = 2(x_k - x_j)", "nu");

  out += "<g id=\"hull\" stroke=\"black\" stroke-width=\"2\" fill=\"none\">\n";
  std::vector<Complex> hull;
  for (std::size_t h = 0; h < polygon.hull.size(); ++h) {
    hull.emplace_back(to_double(polygon.vertex(h).lambda), to_double(polygon.vertex(h).nu));
  }
  out += polyline(f, hull) + "</g>\n";

  out += "<g id=\"points\" fill=\"steelblue\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const auto& p : polygon.points) {
    const double x = f.px(to_double(p.lambda)), y = f.py(to_double(p.nu));
    out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"4\"/>\n";
    const std::string name = p.pair ? "(" + std::to_string(p.pair->j + 1) + "," + std::to_string(p.pair->k + 1) + ")"
                                    : std::string("origin");
    out += "<text x=\"" + num(x + 6) + "\" y=\"" + num(y - 6) + "\">" + escape(name) + "</text>\n";
  }
  out += "</g>\n";

  out += "<g id=\"slopes\" fill=\"darkred\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const auto& s : polygon.slopes) {
    const double xm = (to_double(polygon.vertex(s.left).lambda) + to_double(polygon.vertex(s.right).lambda)) / 2;
    const double ym = (to_double(polygon.vertex(s.left).nu) + to_double(polygon.vertex(s.right).nu)) / 2;
    out += "<text x=\"" + num(f.px(xm) + 8) + "\" y=\"" + num(f.py(ym) + 16) + "\">" +
           escape(s.label() + " = " + to_fraction_string(s.gamma)) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string plot_svg(const SolveResult& solution, const std::vector<ResonanceString>& strings,
                     const DeltaSystem& system, std::size_t curve_samples) {
  const Window& w = solution.window;
  const Frame f{w.re_min, w.re_max, w.im_min, w.im_max};
  std::string out = header() + axes(f, "Re z", "Im z");
  out += "<defs><clipPath id=\"window\"><rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" +
         num(kWidth - 2 * kMargin) + "\" height=\"" + num(kHeight - 2 * kMargin) + "\"/></clipPath></defs>\n";

  out += "<g id=\"contours-real\" stroke=\"red\" stroke-width=\"0.8\" fill=\"none\" clip-path=\"url(#window)\">\n";
  for (const auto& line : solution.real_curves.polylines) out += polyline(f, line);
  out += "</g>\n<g id=\"contours-imag\" stroke=\"blue\" stroke-width=\"0.8\" fill=\"none\" clip-path=\"url(#window)\">\n";
  for (const auto& line : solution.imag_curves.polylines) out += polyline(f, line);
  out += "</g>\n";

  out += "<g id=\"theory\" stroke=\"black\" stroke-width=\"1.2\" stroke-dasharray=\"6,3\" fill=\"none\" "
         "clip-path=\"url(#window)\">\n";
  const std::size_t n = std::max<std::size_t>(curve_samples, 2);
  for (const auto& s : strings) {
    std::vector<Complex> pts;
    for (std::size_t i = 0; i < n; ++i) {
      const double re = w.re_min + w.width() * static_cast<double>(i) / static_cast<double>(n - 1);
      pts.emplace_back(re, theory_curve(s, system, re));
    }
    out += polyline(f, pts);
  }
  out += "</g>\n";

  out += "<g id=\"roots\" fill=\"green\" stroke=\"black\" stroke-width=\"0.5\">\n";
  for (const auto& r : solution.roots) {
    out += "<circle cx=\"" + num(f.px(r.z.real())) + "\" cy=\"" + num(f.py(r.z.imag())) + "\" r=\"3\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace resonance
