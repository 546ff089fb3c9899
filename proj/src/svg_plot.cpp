#include "ilm/svg_plot.hpp"

#include "ilm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace ilm {

namespace {

constexpr double kPanelW = 300, kPanelH = 200;
constexpr double kMarginL = 56, kMarginR = 16, kMarginT = 36, kMarginB = 46;
constexpr double kPanelGap = 26;

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Panel {
  std::string title;
  std::string color;
  std::string y_label;
};

class SvgBuilder {
 public:
  SvgBuilder(int panels, const std::string& x_label)
      : panels_(panels), x_label_(x_label) {
    width_ = kMarginL + panels * kPanelW + (panels - 1) * kPanelGap + kMarginR;
    height_ = kMarginT + kPanelH + kMarginB;
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(width_) +
             "\" height=\"" + f2(height_) + "\" viewBox=\"0 0 " + f2(width_) +
             " " + f2(height_) + "\">\n";
    body_ += "<rect width=\"" + f2(width_) + "\" height=\"" + f2(height_) +
             "\" fill=\"white\"/>\n";
  }

  double x0(int panel) const {
    return kMarginL + panel * (kPanelW + kPanelGap);
  }

  // data-space to pixel-space for the given panel
  double px(int panel, double x, double xmin, double xmax) const {
    const double span = xmax > xmin ? xmax - xmin : 1.0;
    return x0(panel) + (x - xmin) / span * kPanelW;
  }
  double py(double y, double ymin, double ymax) const {
    const double span = ymax > ymin ? ymax - ymin : 1.0;
    return kMarginT + kPanelH - (y - ymin) / span * kPanelH;
  }

  void panel_frame(int panel, const Panel& meta, double xmin, double xmax,
                   double ymin, double ymax,
                   const std::vector<double>& x_ticks,
                   const std::vector<double>& y_ticks) {
    const double left = x0(panel);
    body_ += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    body_ += "<rect x=\"" + f2(left) + "\" y=\"" + f2(kMarginT) + "\" width=\"" +
             f2(kPanelW) + "\" height=\"" + f2(kPanelH) +
             "\" fill=\"none\" stroke=\"#444444\"/>\n";
    body_ += "<text x=\"" + f2(left + kPanelW / 2) + "\" y=\"" +
             f2(kMarginT - 12) + "\" text-anchor=\"middle\" font-size=\"13\">" +
             meta.title + "</text>\n";
    for (double t : x_ticks) {
      const double x = px(panel, t, xmin, xmax);
      body_ += "<line x1=\"" + f2(x) + "\" y1=\"" + f2(kMarginT + kPanelH) +
               "\" x2=\"" + f2(x) + "\" y2=\"" + f2(kMarginT + kPanelH + 4) +
               "\" stroke=\"#444444\"/>\n";
      body_ += "<text x=\"" + f2(x) + "\" y=\"" + f2(kMarginT + kPanelH + 16) +
               "\" text-anchor=\"middle\">" + format_g6(t) + "</text>\n";
    }
    for (double t : y_ticks) {
      const double y = py(t, ymin, ymax);
      body_ += "<line x1=\"" + f2(left - 4) + "\" y1=\"" + f2(y) + "\" x2=\"" +
               f2(left) + "\" y2=\"" + f2(y) + "\" stroke=\"#444444\"/>\n";
      body_ += "<text x=\"" + f2(left - 7) + "\" y=\"" + f2(y + 4) +
               "\" text-anchor=\"end\">" + format_g6(t) + "</text>\n";
    }
    body_ += "<text x=\"" + f2(left + kPanelW / 2) + "\" y=\"" +
             f2(kMarginT + kPanelH + 34) + "\" text-anchor=\"middle\">" +
             x_label_ + "</text>\n";
    body_ += "<text transform=\"translate(" + f2(left - 38) + " " +
             f2(kMarginT + kPanelH / 2) + ") rotate(-90)\" "
             "text-anchor=\"middle\">" +
             meta.y_label + "</text>\n";
    body_ += "</g>\n";
  }

  void polyline(int panel, const std::vector<std::pair<double, double>>& pts,
                double xmin, double xmax, double ymin, double ymax,
                const std::string& color, double width, double opacity,
                const std::string& cls) {
    if (pts.empty()) return;
    body_ += "<polyline class=\"" + cls + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"" + f2(width) + "\"";
    if (opacity < 1.0) body_ += " stroke-opacity=\"" + f2(opacity) + "\"";
    body_ += " points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += f2(px(panel, pts[i].first, xmin, xmax)) + "," +
               f2(py(pts[i].second, ymin, ymax));
    }
    body_ += "\"/>\n";
  }

  std::string finish() {
    body_ += "</svg>\n";
    return std::move(body_);
  }

 private:
  int panels_;
  std::string x_label_;
  double width_ = 0, height_ = 0;
  std::string body_;
};

std::vector<double> integer_ticks(double lo, double hi, int target = 5) {
  std::vector<double> ticks;
  const double span = std::max(1.0, hi - lo);
  double step = std::pow(10.0, std::floor(std::log10(span / target)));
  while (span / step > target * 2) step *= 2;
  if (step < 1.0) step = 1.0;
  const double start = std::ceil(lo / step) * step;
  for (double t = start; t <= hi + 1e-9; t += step) ticks.push_back(t);
  return ticks;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

// #rrggbb between the cold and warm anchors
std::string ramp_color(double t) {
  const int cold[3] = {59, 76, 192}, warm[3] = {180, 4, 38};
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(cold[0] + t * (warm[0] - cold[0]))),
                static_cast<int>(std::lround(cold[1] + t * (warm[1] - cold[1]))),
                static_cast<int>(std::lround(cold[2] + t * (warm[2] - cold[2]))));
  return buf;
}

}  // namespace

std::string metrics_svg(const std::vector<GenerationRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("metrics_svg: no records to plot");
  // replicate -> generation -> (x, c, s), values in CSV precision
  std::map<int, std::map<int, std::array<double, 3>>> series;
  int gmin = records.front().generation, gmax = gmin;
  for (const GenerationRecord& rec : records) {
    series[rec.replicate][rec.generation] = {
        normalize_g6(rec.x), normalize_g6(rec.c), normalize_g6(rec.s)};
    gmin = std::min(gmin, rec.generation);
    gmax = std::max(gmax, rec.generation);
  }
  const Panel panels[3] = {{"expressivity", "blue", "x"},
                           {"compositionality", "orange", "c"},
                           {"stability", "maroon", "s"}};
  SvgBuilder svg(3, "generation");
  const std::vector<double> y_ticks = {0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const std::vector<double> x_ticks = integer_ticks(gmin, gmax);
  for (int metric = 0; metric < 3; ++metric) {
    svg.panel_frame(metric, panels[metric], gmin, gmax, 0.0, 1.0, x_ticks,
                    y_ticks);
    std::map<int, std::pair<double, int>> mean_acc;
    for (const auto& [replicate, by_gen] : series) {
      std::vector<std::pair<double, double>> pts;
      pts.reserve(by_gen.size());
      for (const auto& [gen, values] : by_gen) {
        pts.push_back({static_cast<double>(gen), values[metric]});
        auto& acc = mean_acc[gen];
        acc.first += values[metric];
        ++acc.second;
      }
      svg.polyline(metric, pts, gmin, gmax, 0.0, 1.0, panels[metric].color,
                   1.0, 0.35, "rep");
    }
    std::vector<std::pair<double, double>> mean_pts;
    for (const auto& [gen, acc] : mean_acc)
      mean_pts.push_back({static_cast<double>(gen), acc.first / acc.second});
    svg.polyline(metric, mean_pts, gmin, gmax, 0.0, 1.0, panels[metric].color,
                 2.5, 1.0, "mean");
  }
  return svg.finish();
}

void plot_metrics(const std::vector<GenerationRecord>& records,
                  const std::string& path) {
  write_text(path, metrics_svg(records));
}

std::string losses_svg(const std::vector<GenerationRecord>& records,
                       double loss_divisor) {
  if (records.empty())
    throw std::invalid_argument("losses_svg: no records to plot");
  // panel -> generation -> per-epoch (sum, count) across replicates
  struct Acc {
    std::vector<double> sum;
    std::vector<int> count;
  };
  std::map<int, std::map<int, Acc>> acc;  // panel index -> generation -> acc
  auto add = [&](int panel, int gen, const std::vector<double>& losses,
                 double divisor) {
    if (losses.empty()) return;
    Acc& a = acc[panel][gen];
    if (a.sum.size() < losses.size()) {
      a.sum.resize(losses.size(), 0.0);
      a.count.resize(losses.size(), 0);
    }
    for (size_t e = 0; e < losses.size(); ++e) {
      a.sum[e] += normalize_g6(losses[e] / divisor);
      ++a.count[e];
    }
  };
  for (const GenerationRecord& rec : records) {
    add(0, rec.generation, rec.dec_epoch_loss, 1.0);
    add(1, rec.generation, rec.enc_epoch_loss, 1.0);
    add(2, rec.generation, rec.auto_epoch_loss, loss_divisor);
  }
  const char* names[3] = {"decoder", "encoder", "autoencoder"};
  std::vector<int> present;
  for (int p = 0; p < 3; ++p)
    if (!acc[p].empty()) present.push_back(p);
  if (present.empty())
    throw std::invalid_argument("losses_svg: records carry no loss data");

  double ymax = 0.0;
  size_t emax = 1;
  int gmin = 0, gmax = 0;
  bool first = true;
  for (int p : present)
    for (const auto& [gen, a] : acc[p]) {
      if (first) {
        gmin = gmax = gen;
        first = false;
      }
      gmin = std::min(gmin, gen);
      gmax = std::max(gmax, gen);
      emax = std::max(emax, a.sum.size());
      for (size_t e = 0; e < a.sum.size(); ++e)
        ymax = std::max(ymax, a.sum[e] / a.count[e]);
    }
  if (ymax <= 0.0) ymax = 1.0;

  SvgBuilder svg(static_cast<int>(present.size()), "epoch");
  const std::vector<double> x_ticks = integer_ticks(1, static_cast<double>(emax));
  std::vector<double> y_ticks;
  for (int k = 0; k <= 4; ++k) y_ticks.push_back(normalize_g6(ymax * k / 4));
  for (size_t slot = 0; slot < present.size(); ++slot) {
    const int p = present[slot];
    svg.panel_frame(static_cast<int>(slot), {names[p], "", "loss"}, 1.0,
                    static_cast<double>(emax), 0.0, ymax, x_ticks, y_ticks);
    for (const auto& [gen, a] : acc[p]) {
      std::vector<std::pair<double, double>> pts;
      for (size_t e = 0; e < a.sum.size(); ++e)
        pts.push_back({static_cast<double>(e + 1), a.sum[e] / a.count[e]});
      const double t =
          gmax > gmin ? static_cast<double>(gen - gmin) / (gmax - gmin) : 0.0;
      svg.polyline(static_cast<int>(slot), pts, 1.0,
                   static_cast<double>(emax), 0.0, ymax, ramp_color(t), 1.2,
                   0.9, "gen");
    }
  }
  return svg.finish();
}

void plot_losses(const std::vector<GenerationRecord>& records,
                 const std::string& path, double loss_divisor) {
  write_text(path, losses_svg(records, loss_divisor));
}

}  // namespace ilm
