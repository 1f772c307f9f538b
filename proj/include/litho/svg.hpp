#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace litho {

// Just enough SVG to render the report plots.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height) : w_(width), h_(height) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w_)
          << "\" height=\"" << fmt(h_) << "\" viewBox=\"0 0 " << fmt(w_) << " "
          << fmt(h_) << "\">\n";
    body_ << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w_) << "\" height=\"" << fmt(h_)
          << "\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& color,
            double width = 1.0) {
    body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
          << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color << "\" stroke-width=\""
          << fmt(width) << "\"/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none") {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
          << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
          << "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill) {
    body_ << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r)
          << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 11.0,
            const std::string& anchor = "start") {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\""
          << fmt(size) << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
          << "\">" << escape(s) << "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& color, double width = 1.0) {
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << fmt(width) << "\" points=\"";
    for (const auto& [x, y] : pts) body_ << fmt(x) << "," << fmt(y) << " ";
    body_ << "\"/>\n";
  }

  void save(const std::string& path) const {
    std::ofstream out(path);
    out << body_.str() << "</svg>\n";
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
  }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }

  double w_, h_;
  std::ostringstream body_;
};

// Fixed mineral palette for the track and boxplot views.
inline std::string component_color(std::size_t index) {
  static const char* kPalette[] = {"#e6b800", "#b35900", "#4d94ff", "#00b386",
                                   "#8600b3", "#e60000", "#666633", "#ff8080",
                                   "#00cccc", "#3333cc", "#999999", "#cc6699"};
  return kPalette[index % (sizeof(kPalette) / sizeof(kPalette[0]))];
}

}  // namespace litho
