// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "intertext/error.hpp"
#include "intertext/report.hpp"

namespace intertext {
namespace {

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

std::string xml_escape(std::string_view s) {
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

}  // namespace

std::string render_chart(const std::vector<RatioRow>& rows) {
  if (rows.empty()) throw ValidationError("cannot chart an empty ratio report");
  for (const auto& row : rows) {
    const auto& r = row.result;
    if (!std::isfinite(r.ratio) || !std::isfinite(r.ci_low) || !std::isfinite(r.ci_high)) {
      throw ValidationError(fmt::format("{} / {}: non-finite ratio or interval", row.corpus_id, to_string(r.scope)));
    }
    if (r.ci_low > r.ci_high) {
      throw ValidationError(fmt::format("{} / {}: ci_low {} exceeds ci_high {}", row.corpus_id, to_string(r.scope),
                                        r.ci_low, r.ci_high));
    }
  }

  std::vector<std::string> corpora;
  for (const auto& row : rows) {
    if (std::find(corpora.begin(), corpora.end(), row.corpus_id) == corpora.end()) corpora.push_back(row.corpus_id);
  }
  std::vector<Scope> scopes;
  for (auto s : kAllScopes) {
    if (std::any_of(rows.begin(), rows.end(), [s](const RatioRow& r) { return r.result.scope == s; })) {
      scopes.push_back(s);
    }
  }

  double top = 1.0;
  for (const auto& row : rows) top = std::max({top, row.result.ratio, row.result.ci_high});
  top = std::ceil(top * 1.1 * 4.0) / 4.0;

  const double bar_w = 22.0, group_gap = 30.0, left = 60.0, right = 20.0, plot_top = 40.0, plot_h = 260.0;
  const double group_w = bar_w * static_cast<double>(corpora.size());
  const double plot_w = static_cast<double>(scopes.size()) * (group_w + group_gap) + group_gap;
  const double legend_h = 18.0 * static_cast<double>(corpora.size());
  const double width = left + plot_w + right;
  const double height = plot_top + plot_h + 50.0 + legend_h;
  auto y_of = [&](double v) { return plot_top + plot_h * (1.0 - v / top); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"11\">\n",
      width, height, width, height);
  svg += fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">Intertextuality ratio (95% CI)</text>\n",
                     width / 2);

  for (int i = 0; i <= 4; ++i) {
    double v = top * i / 4.0;
    svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#ddd\"/>\n", left,
                       y_of(v), left + plot_w, y_of(v));
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n", left - 6, y_of(v) + 4, v);
  }
  svg += fmt::format(
      "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n", left,
      y_of(1.0), left + plot_w, y_of(1.0));

  for (std::size_t g = 0; g < scopes.size(); ++g) {
    const double gx = left + group_gap + static_cast<double>(g) * (group_w + group_gap);
    for (std::size_t c = 0; c < corpora.size(); ++c) {
      auto it = std::find_if(rows.begin(), rows.end(), [&](const RatioRow& r) {
        return r.corpus_id == corpora[c] && r.result.scope == scopes[g];
      });
      if (it == rows.end()) continue;
      const auto& r = it->result;
      const double x = gx + static_cast<double>(c) * bar_w;
      const double cx = x + bar_w / 2;
      svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\">"
                         "<title>{} {}: {:.3f} [{:.3f}, {:.3f}]</title></rect>\n",
                         x + 2, y_of(r.ratio), bar_w - 4, y_of(0.0) - y_of(r.ratio), kPalette[c % 10],
                         xml_escape(corpora[c]), to_string(r.scope), r.ratio, r.ci_low, r.ci_high);
      svg += fmt::format(
          "<path class=\"errorbar\" d=\"M{0:.1f} {1:.1f}V{2:.1f}M{3:.1f} {1:.1f}H{4:.1f}M{3:.1f} {2:.1f}H{4:.1f}\" "
          "stroke=\"black\" fill=\"none\"/>\n",
          cx, y_of(r.ci_low), y_of(r.ci_high), cx - 4, cx + 4);
    }
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", gx + group_w / 2,
                       plot_top + plot_h + 18, to_string(scopes[g]));
  }
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", left,
                     plot_top, plot_top + plot_h);
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{2:.1f}\" x2=\"{1:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", left,
                     left + plot_w, plot_top + plot_h);

  for (std::size_t c = 0; c < corpora.size(); ++c) {
    const double ly = plot_top + plot_h + 36 + 18.0 * static_cast<double>(c);
    svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", left, ly - 10,
                       kPalette[c % 10]);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + 18, ly, xml_escape(corpora[c]));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace intertext
