#include "dctfuse/cost.hpp"

#include <cstdio>
#include <stdexcept>

namespace dctfuse {

double dct2_cost(int block) {
  const double b = block;
  return 2.0 * b * b * b;
}

double dct1_cost(int length) {
  const double k = length;
  return k * k;
}

CostReport estimate_cost(const PipelineConfig& cfg, int width, int height,
                         int exposures) {
  if (width <= 0 || height <= 0 || exposures <= 0) {
    throw std::invalid_argument("cost estimate needs positive dimensions");
  }
  const double K = exposures;
  const double b2 = static_cast<double>(cfg.fusion.block) * cfg.fusion.block;
  const double ns2 =
      static_cast<double>(cfg.match.search_window) * cfg.match.search_window;
  const double k = cfg.match.group_size;

  CostReport r;
  r.terms = {{
      {"dct2d_search_window", K * ns2 * dct2_cost(cfg.fusion.block)},
      {"block_matching", 2.0 * K * b2 * ns2},
      {"dct1d_collaborative", 2.0 * K * b2 * dct1_cost(cfg.match.group_size)},
      {"fusion", 2.0 * K * k * b2},
      {"idct2d_fused", k * dct2_cost(cfg.fusion.block)},
      {"aggregation", k * b2},
  }};
  for (const auto& t : r.terms) r.ops_per_pixel += t.ops_per_pixel;
  r.pixels = static_cast<double>(width) * height;
  r.total_ops = r.ops_per_pixel * r.pixels;
  r.step_adjusted_ops =
      r.total_ops / (static_cast<double>(cfg.step) * cfg.step);
  return r;
}

std::string format_cost_report(const CostReport& report) {
  std::string out;
  char line[128];
  for (const auto& t : report.terms) {
    std::snprintf(line, sizeof line, "%-24s %.6g ops/pixel\n",
                  std::string(t.label).c_str(), t.ops_per_pixel);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-24s %.6g ops/pixel\n", "per_pixel_total",
                report.ops_per_pixel);
  out += line;
  std::snprintf(line, sizeof line, "%-24s %.6g ops\n", "total", report.total_ops);
  out += line;
  std::snprintf(line, sizeof line, "%-24s %.6g ops\n", "total_step_adjusted",
                report.step_adjusted_ops);
  out += line;
  return out;
}

}  // namespace dctfuse
