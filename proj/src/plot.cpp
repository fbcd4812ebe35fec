#include "transl2e/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace transl2e {

namespace {

const char* kPalette[] = {"#4878d0", "#ee854a", "#6acc64", "#d65f5f",
                          "#956cb4", "#8c613c", "#dc7ec0", "#797979"};

struct Box {
  double q25 = 0, median = 0, q75 = 0, lo = 0, hi = 0;
  std::vector<double> outliers;
};

Box make_box(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t a = static_cast<std::size_t>(pos);
    const std::size_t b = std::min(a + 1, v.size() - 1);
    const double f = pos - static_cast<double>(a);
    return v[a] * (1.0 - f) + v[b] * f;
  };
  Box box;
  box.q25 = q(0.25);
  box.median = q(0.5);
  box.q75 = q(0.75);
  const double iqr = box.q75 - box.q25;
  const double lo_fence = box.q25 - 1.5 * iqr;
  const double hi_fence = box.q75 + 1.5 * iqr;
  box.lo = box.q75;
  box.hi = box.q25;
  for (double x : v) {
    if (x >= lo_fence && x <= hi_fence) {
      box.lo = std::min(box.lo, x);
      box.hi = std::max(box.hi, x);
    } else {
      box.outliers.push_back(x);
    }
  }
  return box;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ~5 round tick values covering [lo, hi]
std::vector<double> nice_ticks(double lo, double hi) {
  if (!(hi > lo)) hi = lo + 1.0;
  const double raw = (hi - lo) / 4.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

const char* x_label(const std::string& experiment) {
  if (experiment == "outlier_prop") return "source outlier proportion";
  if (experiment == "model_shift") return "model shift sigma";
  if (experiment == "precision_shift") return "precision shift nu";
  if (experiment == "dimension") return "feature dimension p";
  if (experiment == "source_count") return "number of sources K";
  if (experiment == "selection_ablation") return "model shift sigma";
  return "grid value";
}

struct PanelData {
  std::vector<double> grid;                         // sorted grid values
  std::vector<std::string> methods;                 // emission order
  std::map<std::pair<int, int>, std::vector<double>> values;  // (gi, mi) -> data
};

void draw_panel(std::ostream& svg, const PanelData& d, double ox, double oy,
                double width, double height, const std::string& title,
                const std::string& xlab) {
  const double pad_l = 46, pad_b = 34, pad_t = 22, pad_r = 8;
  const double plot_w = width - pad_l - pad_r;
  const double plot_h = height - pad_t - pad_b;

  double lo = 1e300, hi = -1e300;
  std::map<std::pair<int, int>, Box> boxes;
  for (const auto& [key, vals] : d.values) {
    if (vals.empty()) continue;
    Box b = make_box(vals);
    lo = std::min({lo, b.lo, b.outliers.empty() ? b.lo
                                                : *std::min_element(b.outliers.begin(),
                                                                    b.outliers.end())});
    hi = std::max({hi, b.hi, b.outliers.empty() ? b.hi
                                                : *std::max_element(b.outliers.begin(),
                                                                    b.outliers.end())});
    boxes[key] = std::move(b);
  }
  if (lo > hi) {
    lo = 0;
    hi = 1;
  }
  const double span = hi - lo;
  lo -= 0.05 * (span > 0 ? span : 1.0);
  hi += 0.05 * (span > 0 ? span : 1.0);

  auto ypix = [&](double v) { return oy + pad_t + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  svg << "<text x='" << ox + pad_l + plot_w / 2 << "' y='" << oy + 14
      << "' text-anchor='middle' font-size='13' font-weight='bold'>" << title
      << "</text>\n";

  // axes and ticks
  svg << "<line x1='" << ox + pad_l << "' y1='" << oy + pad_t << "' x2='" << ox + pad_l
      << "' y2='" << oy + pad_t + plot_h << "' stroke='black'/>\n";
  svg << "<line x1='" << ox + pad_l << "' y1='" << oy + pad_t + plot_h << "' x2='"
      << ox + pad_l + plot_w << "' y2='" << oy + pad_t + plot_h
      << "' stroke='black'/>\n";
  for (double t : nice_ticks(lo, hi)) {
    const double y = ypix(t);
    svg << "<line x1='" << ox + pad_l - 4 << "' y1='" << y << "' x2='" << ox + pad_l
        << "' y2='" << y << "' stroke='black'/>\n";
    svg << "<line x1='" << ox + pad_l << "' y1='" << y << "' x2='" << ox + pad_l + plot_w
        << "' y2='" << y << "' stroke='#dddddd' stroke-width='0.5'/>\n";
    svg << "<text x='" << ox + pad_l - 7 << "' y='" << y + 3.5
        << "' text-anchor='end' font-size='10'>" << fmt(t) << "</text>\n";
  }

  const int n_grid = static_cast<int>(d.grid.size());
  const int n_meth = static_cast<int>(d.methods.size());
  const double slot_w = plot_w / std::max(1, n_grid);
  const double group_w = slot_w * 0.82;
  const double box_w = std::min(28.0, group_w / std::max(1, n_meth));

  for (int gi = 0; gi < n_grid; ++gi) {
    const double slot_x = ox + pad_l + slot_w * (gi + 0.5);
    svg << "<text x='" << slot_x << "' y='" << oy + pad_t + plot_h + 14
        << "' text-anchor='middle' font-size='10'>" << fmt(d.grid[gi]) << "</text>\n";
    for (int mi = 0; mi < n_meth; ++mi) {
      const auto it = boxes.find({gi, mi});
      if (it == boxes.end()) continue;
      const Box& b = it->second;
      const char* color = kPalette[mi % 8];
      const double cx = slot_x + box_w * (mi - (n_meth - 1) / 2.0);
      const double x0 = cx - box_w * 0.38, x1 = cx + box_w * 0.38;
      svg << "<line x1='" << cx << "' y1='" << ypix(b.lo) << "' x2='" << cx << "' y2='"
          << ypix(b.q25) << "' stroke='" << color << "'/>\n";
      svg << "<line x1='" << cx << "' y1='" << ypix(b.q75) << "' x2='" << cx << "' y2='"
          << ypix(b.hi) << "' stroke='" << color << "'/>\n";
      svg << "<rect x='" << x0 << "' y='" << ypix(b.q75) << "' width='" << x1 - x0
          << "' height='" << ypix(b.q25) - ypix(b.q75) << "' fill='" << color
          << "' fill-opacity='0.45' stroke='" << color << "'/>\n";
      svg << "<line x1='" << x0 << "' y1='" << ypix(b.median) << "' x2='" << x1
          << "' y2='" << ypix(b.median) << "' stroke='" << color
          << "' stroke-width='2'/>\n";
      for (double out : b.outliers) {
        svg << "<circle cx='" << cx << "' cy='" << ypix(out) << "' r='1.6' fill='"
            << color << "'/>\n";
      }
    }
  }
  svg << "<text x='" << ox + pad_l + plot_w / 2 << "' y='" << oy + height - 4
      << "' text-anchor='middle' font-size='11'>" << xlab << "</text>\n";
}

}  // namespace

std::vector<std::string> write_experiment_svgs(const ResultsTable& table,
                                               const std::string& out_dir) {
  // first-appearance order of experiments, grids, methods
  std::vector<std::string> experiments;
  for (const ResultRow& r : table.rows) {
    if (std::find(experiments.begin(), experiments.end(), r.experiment) ==
        experiments.end()) {
      experiments.push_back(r.experiment);
    }
  }

  std::vector<std::string> written;
  for (const std::string& exp : experiments) {
    PanelData rel, f1;
    for (const ResultRow& r : table.rows) {
      if (r.experiment != exp) continue;
      int gi = -1, mi = -1;
      for (std::size_t i = 0; i < rel.grid.size(); ++i) {
        if (rel.grid[i] == r.grid_value) gi = static_cast<int>(i);
      }
      if (gi < 0) {
        rel.grid.push_back(r.grid_value);
        f1.grid.push_back(r.grid_value);
        gi = static_cast<int>(rel.grid.size()) - 1;
      }
      for (std::size_t i = 0; i < rel.methods.size(); ++i) {
        if (rel.methods[i] == r.method) mi = static_cast<int>(i);
      }
      if (mi < 0) {
        rel.methods.push_back(r.method);
        f1.methods.push_back(r.method);
        mi = static_cast<int>(rel.methods.size()) - 1;
      }
      if (std::isfinite(r.rel_err)) rel.values[{gi, mi}].push_back(r.rel_err);
      if (std::isfinite(r.f1)) f1.values[{gi, mi}].push_back(r.f1);
    }

    const double panel_w = 460, panel_h = 330, legend_h = 26;
    const double width = 2 * panel_w + 20, height = panel_h + legend_h;
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
        << height << "' viewBox='0 0 " << width << ' ' << height
        << "' font-family='sans-serif'>\n";
    svg << "<rect width='" << width << "' height='" << height << "' fill='white'/>\n";

    double lx = 10;
    for (std::size_t mi = 0; mi < rel.methods.size(); ++mi) {
      const char* color = kPalette[mi % 8];
      svg << "<rect x='" << lx << "' y='8' width='12' height='12' fill='" << color
          << "' fill-opacity='0.45' stroke='" << color << "'/>\n";
      svg << "<text x='" << lx + 16 << "' y='18' font-size='11'>" << rel.methods[mi]
          << "</text>\n";
      lx += 24 + 7.0 * static_cast<double>(rel.methods[mi].size());
    }

    draw_panel(svg, rel, 0, legend_h, panel_w, panel_h, "relative error", x_label(exp));
    draw_panel(svg, f1, panel_w + 20, legend_h, panel_w, panel_h, "F1 score",
               x_label(exp));
    svg << "</svg>\n";

    const std::string path = out_dir + "/" + exp + ".svg";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << svg.str();
    written.push_back(path);
  }
  return written;
}

}  // namespace transl2e
