#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "msbench/modelcomp/comparison.hpp"

namespace msbench::modelcomp {

namespace detail {
inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace detail

// Critical-difference style diagram: a rank axis (1 on the left), one label
// per model hanging off its average rank, and a bar per clique.
inline void write_cd_svg(std::ostream& out, const ComparisonReport& r) {
  const std::size_t k = r.models.size();
  const double width = 640, margin = 140;
  const double axis_y = 60, step = (width - 2 * margin) / static_cast<double>(k > 1 ? k - 1 : 1);
  auto x_of = [&](double rank) { return margin + (rank - 1.0) * step; };

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.average_ranks[a] < r.average_ranks[b]; });
  const std::size_t left = (k + 1) / 2;
  const double label_y0 = axis_y + 30 + 14 * static_cast<double>(r.cliques.size());
  const double height = label_y0 + 22 * static_cast<double>(left) + 20;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << detail::fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << axis_y << "\" x2=\"" << detail::fmt(x_of(static_cast<double>(k)))
      << "\" y2=\"" << axis_y << "\" stroke=\"black\"/>\n";
  for (std::size_t t = 1; t <= k; ++t) {
    const double x = x_of(static_cast<double>(t));
    out << "<line x1=\"" << detail::fmt(x) << "\" y1=\"" << axis_y - 5 << "\" x2=\"" << detail::fmt(x) << "\" y2=\""
        << axis_y << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << detail::fmt(x) << "\" y=\"" << axis_y - 10 << "\" text-anchor=\"middle\">" << t
        << "</text>\n";
  }
  for (std::size_t c = 0; c < r.cliques.size(); ++c) {
    const auto& clique = r.cliques[c];
    if (clique.size() < 2) continue;
    const double y = axis_y + 12 + 14 * static_cast<double>(c);
    out << "<line x1=\"" << detail::fmt(x_of(r.average_ranks[clique.front()]) - 3) << "\" y1=\"" << detail::fmt(y)
        << "\" x2=\"" << detail::fmt(x_of(r.average_ranks[clique.back()]) + 3) << "\" y2=\"" << detail::fmt(y)
        << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t m = order[i];
    const double x = x_of(r.average_ranks[m]);
    const bool on_left = i < left;
    const std::size_t slot = on_left ? i : k - 1 - i;
    const double y = label_y0 + 22 * static_cast<double>(slot);
    const double end = on_left ? margin - 10 : width - margin + 10;
    out << "<polyline points=\"" << detail::fmt(x) << ',' << axis_y << ' ' << detail::fmt(x) << ',' << detail::fmt(y)
        << ' ' << detail::fmt(end) << ',' << detail::fmt(y) << "\" fill=\"none\" stroke=\"gray\"/>\n";
    out << "<text x=\"" << detail::fmt(on_left ? end - 4 : end + 4) << "\" y=\"" << detail::fmt(y + 4)
        << "\" text-anchor=\"" << (on_left ? "end" : "start") << "\">" << detail::xml_escape(r.models[m]) << " ("
        << detail::fmt(r.average_ranks[m]) << ")</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace msbench::modelcomp
