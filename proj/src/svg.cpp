#include <sstream>

#include "nomoforge/format.hpp"
#include "nomoforge/layout.hpp"

namespace nomoforge {

namespace {

constexpr const char* kFontStack = "Helvetica, Arial, sans-serif";
constexpr const char* kAxisColor = "#4D4D4D";
constexpr const char* kFrameColor = "#D9D9D9";

std::string esc(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string n(double v) { return format_fixed2(v); }

const char* anchor_name(TextAnchor anchor) {
  switch (anchor) {
    case TextAnchor::Start: return "start";
    case TextAnchor::Middle: return "middle";
    case TextAnchor::End: return "end";
  }
  return "start";
}

class SvgWriter {
 public:
  explicit SvgWriter(std::ostringstream& os) : os_(os) {}

  void text(const Text& t, const char* cls = nullptr) {
    os_ << "<text";
    if (cls) os_ << " class=\"" << cls << "\"";
    os_ << " x=\"" << n(t.x) << "\" y=\"" << n(t.y) << "\" font-size=\"" << n(t.size) << "\" text-anchor=\""
        << anchor_name(t.anchor) << "\"";
    if (t.rotate != 0) os_ << " transform=\"rotate(" << n(t.rotate) << " " << n(t.x) << " " << n(t.y) << ")\"";
    os_ << " fill=\"" << kAxisColor << "\">" << esc(t.content) << "</text>\n";
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
            bool dotted = false, const char* cls = nullptr) {
    os_ << "<line";
    if (cls) os_ << " class=\"" << cls << "\"";
    os_ << " x1=\"" << n(x1) << "\" y1=\"" << n(y1) << "\" x2=\"" << n(x2) << "\" y2=\"" << n(y2)
        << "\" stroke=\"" << stroke << "\" stroke-width=\"" << n(width) << "\"";
    if (dotted) os_ << " stroke-dasharray=\"" << n(2) << "," << n(3) << "\"";
    os_ << "/>\n";
  }

  void operator()(const Tile& t) {
    os_ << "<rect class=\"tile\" x=\"" << n(t.x) << "\" y=\"" << n(t.y) << "\" width=\"" << n(t.width)
        << "\" height=\"" << n(t.height) << "\" fill=\"" << t.fill << "\"/>\n";
  }

  void operator()(const Marker& m) {
    os_ << "<circle class=\"marker\" cx=\"" << n(m.x) << "\" cy=\"" << n(m.y) << "\" r=\"" << n(m.radius)
        << "\" fill=\"" << m.fill << "\"/>\n";
  }

  void operator()(const PolyLine& p) {
    os_ << "<polyline class=\"series\" points=\"";
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      if (i) os_ << ' ';
      os_ << n(p.points[i].x) << ',' << n(p.points[i].y);
    }
    os_ << "\" fill=\"none\" stroke=\"" << p.stroke << "\" stroke-width=\"" << n(1) << "\"/>\n";
  }

  void operator()(const ReferenceLine& r) { line(r.x1, r.y1, r.x2, r.y2, r.stroke, 1, r.dotted, "threshold"); }

  void operator()(const Text& t) { text(t); }

 private:
  std::ostringstream& os_;
};

void render_panel(std::ostringstream& os, SvgWriter& w, const Panel& panel) {
  os << "<g class=\"panel\" data-role=\"" << to_string(panel.role) << "\" transform=\"translate(" << n(panel.x)
     << "," << n(panel.y) << ")\">\n";
  os << "<rect class=\"frame\" x=\"" << n(0) << "\" y=\"" << n(0) << "\" width=\"" << n(panel.width)
     << "\" height=\"" << n(panel.height) << "\" fill=\"none\" stroke=\"" << kFrameColor << "\" stroke-width=\""
     << n(1) << "\"/>\n";

  const bool tile_columns = panel.role == PanelRole::Tile;
  w.text({panel.width / 2, tile_columns ? -56.0 : -12.0, panel.title, TextAnchor::Middle, 12, 0}, "panel-title");

  // x axis; tile panels name their columns above the tiles.
  if (tile_columns) {
    for (const auto& tick : panel.x_ticks) w.text({tick.position, -6, tick.label, TextAnchor::Start, 10, -45});
  } else {
    w.line(0, panel.height, panel.width, panel.height, kAxisColor, 1);
    for (const auto& tick : panel.x_ticks) {
      w.line(tick.position, panel.height, tick.position, panel.height + 4, kAxisColor, 1);
      w.text({tick.position, panel.height + 16, tick.label, TextAnchor::Middle, 10, 0});
    }
  }
  if (!panel.x_label.empty()) {
    w.text({panel.width / 2, panel.height + (tile_columns ? 16.0 : 34.0), panel.x_label, TextAnchor::Middle, 11, 0},
           "axis-label");
  }
  if (!panel.y_label.empty()) {
    const double x = 16 - panel.x;
    w.text({x, panel.height / 2, panel.y_label, TextAnchor::Middle, 11, -90}, "axis-label");
  }

  for (const auto& element : panel.elements) std::visit(w, element);
  os << "</g>\n";
}

}  // namespace

std::string render_svg(const NomogramLayout& layout) {
  std::ostringstream os;
  SvgWriter w(os);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << n(layout.width) << "\" height=\""
     << n(layout.height) << "\" viewBox=\"0 0 " << n(layout.width) << " " << n(layout.height)
     << "\" font-family=\"" << kFontStack << "\" data-kind=\"" << to_string(layout.kind) << "\">\n";
  os << "<rect class=\"background\" x=\"" << n(0) << "\" y=\"" << n(0) << "\" width=\"" << n(layout.width)
     << "\" height=\"" << n(layout.height) << "\" fill=\"#FFFFFF\"/>\n";
  w.text({layout.width / 2, 18, layout.title, TextAnchor::Middle, 14, 0}, "title");

  for (const auto& panel : layout.panels) render_panel(os, w, panel);

  if (!layout.legend.empty()) {
    os << "<g class=\"legend\" transform=\"translate(" << n(40) << "," << n(layout.height - 22) << ")\">\n";
    double x = 0;
    for (const auto& entry : layout.legend) {
      os << "<rect class=\"swatch\" x=\"" << n(x) << "\" y=\"" << n(-9) << "\" width=\"" << n(10) << "\" height=\""
         << n(10) << "\" fill=\"" << entry.color << "\"/>\n";
      w.text({x + 14, 0, entry.label, TextAnchor::Start, 10, 0});
      x += 14 + 6.0 * static_cast<double>(entry.label.size()) + 18;
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nomoforge
