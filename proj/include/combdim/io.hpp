#pragma once

// Report emission: JSON with 17 significant digits, CSV tables, SVG plots.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "combdim/comb_domain.hpp"
#include "combdim/dimension.hpp"
#include "combdim/error.hpp"
#include "combdim/estimate.hpp"
#include "combdim/geometry.hpp"
#include "combdim/two_sided.hpp"

namespace combdim {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

/// %.17g, with a trailing ".0" for integral values so the type survives a
/// round trip. Non-finite values have no JSON form and become null.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump_json(const Json& j, std::string& out, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_json(it.value(), out, indent, level + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_json(e, out, indent, level + 1);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string dump_json17(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_json(j, out, indent, 0);
  out += "\n";
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

inline Json to_json(Point2 p) { return Json::array({p.x, p.y}); }

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << "\n";
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class I>
    requires std::is_integral_v<I>
  static std::string cell(I v) {
    return std::to_string(v);
  }
  std::ostringstream out_;
};

inline std::string pairs_csv(const CEstimate& est) {
  CsvWriter w({"x1", "y1", "x2", "y2", "integral", "ratio", "case"});
  for (const PairRecord& r : est.pairs) w.row(r.x.x, r.x.y, r.y.x, r.y.y, r.integral, r.ratio, to_string(r.kind));
  return w.str();
}

inline std::string boxcounts_csv(const DimensionEstimate& est) {
  CsvWriter w({"scale", "count"});
  for (const ScaleCount& c : est.counts) w.row(c.scale, c.count);
  return w.str();
}

inline std::string nets_csv(const NetBoundResult& res) {
  CsvWriter w({"i", "k", "j_witness", "N_j"});
  for (const NetBallDiagnostic& b : res.balls) w.row(b.i, b.k, b.j_witness, b.n_j);
  return w.str();
}

inline std::string polyline_csv(const std::vector<Polyline>& lines) {
  CsvWriter w({"x", "y"});
  for (const Polyline& pl : lines) {
    for (const Point2& v : pl.vertices()) w.row(v.x, v.y);
    if (pl.closed() && !pl.empty()) w.row(pl.vertices().front().x, pl.vertices().front().y);
  }
  return w.str();
}

// ---------------------------------------------------------------------------
// SVG

struct SvgOverlay {
  std::vector<Point2> points;
  std::string color = "#d62728";
  double radius = 0.008;
};

/// Boundary polyline on a 1024x1024 canvas showing [-1.1, 1.1]^2, y up.
inline std::string domain_svg(const CombDomain& domain, int depth, const std::vector<SvgOverlay>& overlays = {}) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1024\" height=\"1024\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n";
  s << "<rect x=\"-1.1\" y=\"-1.1\" width=\"2.2\" height=\"2.2\" fill=\"white\"/>\n";
  s << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"0.003\">\n";
  for (const Polyline& pl : domain.boundary_polyline(depth)) {
    s << (pl.closed() ? "<polygon" : "<polyline") << " points=\"";
    bool first = true;
    for (const Point2& v : pl.vertices()) {
      s << (first ? "" : " ") << format_double(v.x) << "," << format_double(v.y);
      first = false;
    }
    s << "\"/>\n";
  }
  for (const SvgOverlay& ov : overlays) {
    for (const Point2& p : ov.points) {
      s << "<circle cx=\"" << format_double(p.x) << "\" cy=\"" << format_double(p.y) << "\" r=\""
        << format_double(ov.radius) << "\" fill=\"" << ov.color << "\" stroke=\"none\"/>\n";
    }
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

// ---------------------------------------------------------------------------
// JSON views of results

inline Json to_json(const CEstimate& e, double bound) {
  Json j;
  j["value"] = e.value;
  j["label"] = "lower estimate of the pairwise supremum over the connecting-curve family";
  j["pair_count"] = e.pair_count;
  j["seed"] = e.seed;
  j["worst_index"] = e.worst_index;
  j["worst_pair"] = Json::array({to_json(e.worst_x), to_json(e.worst_y)});
  j["worst_case"] = to_string(e.worst_case);
  j["lemma_bound"] = bound;
  return j;
}

inline Json to_json(const TwoSidedCertificate& c) {
  Json j;
  j["center"] = to_json(c.center);
  j["verdict"] = to_string(c.verdict);
  j["reason"] = c.reason;
  j["levels"] = Json::array({c.i_min, c.i_max});
  j["resolution"] = c.resolution;
  j["tail_start"] = c.tail_start;
  Json scales = Json::array();
  for (const ScaleRecord& s : c.scales) {
    Json r;
    r["level"] = s.level;
    r["radius"] = s.radius;
    r["components"] = s.component_count;
    r["near_center"] = s.near_center;
    r["chain_labels"] = s.chain_labels;
    scales.push_back(r);
  }
  j["scales"] = scales;
  Json nest = Json::array();
  for (const NestingStep& n : c.nesting) {
    Json r;
    r["from_level"] = n.from_level;
    r["to_level"] = n.to_level;
    r["from_labels"] = n.from_labels;
    r["hit_labels"] = n.hit_labels;
    r["unmapped_cells"] = n.unmapped_cells;
    nest.push_back(r);
  }
  j["nesting"] = nest;
  return j;
}

inline Json to_json(const DimensionEstimate& d) {
  Json j;
  j["value"] = d.value;
  j["method"] = d.method == DimensionMethod::box ? "box" : "net";
  j["scale_range"] = Json::array({d.finest, d.coarsest});
  if (d.method == DimensionMethod::box) j["residual"] = d.residual;
  return j;
}

}  // namespace combdim
