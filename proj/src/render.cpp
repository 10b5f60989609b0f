#include "render.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

namespace lvp {
namespace render {

namespace {

constexpr double kMargin = 40.0;
constexpr double kSide = 480.0;

double px(double x) { return kMargin + x * kSide; }
double py(double y) { return kMargin + y * kSide; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
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

struct Pt {
  double x;
  double y;
};

// Walks the polyline corners and cuts every hop whose short way around the
// vertical circle passes through y = 0 (identified with y = 1). Each cut ends
// the current run on one border and restarts it on the other, so a wrapping
// edge comes out as two drawable runs.
std::vector<std::vector<Pt>> split_runs(const std::vector<Pt>& corners) {
  std::vector<std::vector<Pt>> runs;
  runs.push_back({corners.front()});
  for (std::size_t i = 1; i < corners.size(); ++i) {
    Pt a = runs.back().back();
    Pt b = corners[i];
    double dy = b.y - a.y;
    if (dy > 0.5 || dy < -0.5) {
      // Interpolate the crossing x by the two arc lengths on either side of
      // the border.
      double d1 = dy > 0 ? a.y : 1.0 - a.y;
      double d2 = dy > 0 ? 1.0 - b.y : b.y;
      double t = d1 + d2 > 0 ? d1 / (d1 + d2) : 0.0;
      double xc = a.x + (b.x - a.x) * t;
      runs.back().push_back({xc, dy > 0 ? 0.0 : 1.0});
      runs.push_back({{xc, dy > 0 ? 1.0 : 0.0}});
    }
    runs.back().push_back(b);
  }
  // A cut landing exactly on a corner leaves a one-point run behind; those
  // draw nothing.
  std::vector<std::vector<Pt>> kept;
  for (auto& r : runs) {
    bool degenerate = true;
    for (const Pt& p : r)
      if (p.x != r.front().x || p.y != r.front().y) degenerate = false;
    if (r.size() >= 2 && !degenerate) kept.push_back(std::move(r));
  }
  return kept;
}

}  // namespace

std::string render_svg(const LevelGraph& g, const torus::TorusEmbedding& emb) {
  if (!torus::check_embedding(g, emb))
    throw Error(ErrKind::Precondition,
                "render needs an embedding accepted by check_embedding");

  int k = g.levels();
  double w = 2 * kMargin + kSide;

  // Positions on each level: rank along the circular order, counted from the
  // lexicographically smallest vertex, scaled to [0, 1).
  std::map<std::string, double> vy;
  std::map<int, std::vector<std::string>> level_seq;
  for (const auto& [lvl, order] : emb.level_orders) {
    level_seq[lvl] = order.canonical().elems();
    const auto& elems = level_seq[lvl];
    for (std::size_t r = 0; r < elems.size(); ++r)
      vy[elems[r]] = double(r) / double(elems.size());
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
      << "\" height=\"" << num(w) << "\" viewBox=\"0 0 " << num(w) << " "
      << num(w) << "\">\n";
  out << "<rect class=\"seam\" x=\"" << num(px(0)) << "\" y=\"" << num(py(0))
      << "\" width=\"" << num(kSide) << "\" height=\"" << num(kSide)
      << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-dasharray=\"5 4\"/>\n";

  for (int j = 1; j <= k; ++j) {
    double x = double(j - 1) / k;
    out << "<line class=\"level\" x1=\"" << num(px(x)) << "\" y1=\""
        << num(py(0)) << "\" x2=\"" << num(px(x)) << "\" y2=\"" << num(py(1))
        << "\" stroke=\"#999999\"/>\n";
  }

  for (const auto& [lvl, order] : emb.layer_orders) {
    const auto layer = g.layer_edges(lvl);
    std::map<std::string, const Edge*> by_id;
    for (const Edge& e : layer) by_id[e.id] = &e;
    double x_from = double(lvl - 1) / k;
    double x_to = double(lvl) / k;  // the right border for the wrap layer
    double x_mid = (x_from + x_to) / 2;
    const auto ids = order.canonical().elems();
    for (std::size_t r = 0; r < ids.size(); ++r) {
      const Edge& e = *by_id.at(ids[r]);
      std::vector<Pt> corners = {{x_from, vy.at(e.from)}};
      if (ids.size() > 1) {
        // Private midline track per edge so the layer's circular order stays
        // readable; a lone edge can run straight.
        double track = (double(r) + 0.5) / double(ids.size());
        corners.push_back({x_mid, track});
      }
      corners.push_back({x_to, vy.at(e.to)});
      for (const auto& run : split_runs(corners)) {
        out << "<polyline class=\"edge\" data-edge=\"" << xml_escape(e.id)
            << "\" fill=\"none\" stroke=\"#1d5c87\" stroke-width=\"1.4\" "
               "points=\"";
        for (std::size_t i = 0; i < run.size(); ++i) {
          if (i) out << " ";
          out << num(px(run[i].x)) << "," << num(py(run[i].y));
        }
        out << "\"/>\n";
      }
    }
  }

  for (const auto& [lvl, seq] : level_seq) {
    double x = double(lvl - 1) / k;
    for (const std::string& v : seq) {
      out << "<circle class=\"vertex\" cx=\"" << num(px(x)) << "\" cy=\""
          << num(py(vy.at(v))) << "\" r=\"3.5\" fill=\"#b3352c\"/>\n";
      out << "<text class=\"label\" x=\"" << num(px(x) + 5) << "\" y=\""
          << num(py(vy.at(v)) - 5)
          << "\" font-family=\"monospace\" font-size=\"11\">" << xml_escape(v)
          << "</text>\n";
    }
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace render
}  // namespace lvp
