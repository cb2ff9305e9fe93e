#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace brf {

namespace {

constexpr int kSize = 640;
constexpr int kMargin = 48;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

struct Frame {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kMargin + (x - x_min) / (x_max - x_min) * (kSize - 2 * kMargin);
  }
  double py(double y) const {
    return kSize - kMargin - (y - y_min) / (y_max - y_min) * (kSize - 2 * kMargin);
  }
};

void open_svg(std::string& out, const std::string& title, const Frame& f) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kSize) +
         "\" height=\"" + std::to_string(kSize) + "\" viewBox=\"0 0 " + std::to_string(kSize) +
         " " + std::to_string(kSize) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<rect x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kMargin) +
         "\" width=\"" + std::to_string(kSize - 2 * kMargin) + "\" height=\"" +
         std::to_string(kSize - 2 * kMargin) + "\" fill=\"none\" stroke=\"#999\"/>\n";
  out += "<text x=\"" + std::to_string(kSize / 2) +
         "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         title + "</text>\n";
  out += "<text x=\"" + std::to_string(kMargin) + "\" y=\"" + std::to_string(kSize - 16) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">x: [" + num(f.x_min) +
         ", " + num(f.x_max) + "]  y: [" + num(f.y_min) + ", " + num(f.y_max) + "]</text>\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(file), "cannot open for writing: " + path.string());
  file.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(file), "failed writing: " + path.string());
}

}  // namespace

void write_scatter_svg(const std::filesystem::path& path, const Mat& points,
                       const std::string& title) {
  require(points.rows() == 2 && points.cols() > 0, "write_scatter_svg: needs 2 x n points");
  Frame f{std::floor(points.row(0).minCoeff()) - 1.0, std::ceil(points.row(0).maxCoeff()) + 1.0,
          std::floor(points.row(1).minCoeff()) - 1.0, std::ceil(points.row(1).maxCoeff()) + 1.0};
  std::string out;
  open_svg(out, title, f);
  for (Index j = 0; j < points.cols(); ++j) {
    out += "<circle cx=\"" + num(f.px(points(0, j))) + "\" cy=\"" + num(f.py(points(1, j))) +
           "\" r=\"2\" fill=\"#4682b4\" fill-opacity=\"0.45\"/>\n";
  }
  out += "</svg>\n";
  write_file(path, out);
}

void write_quiver_svg(const std::filesystem::path& path, const GridField& field,
                      const std::string& title) {
  require(field.points.rows() == 2 && field.values.rows() == 2,
          "write_quiver_svg: needs a planar field");
  const Frame f{field.spec.x_min, field.spec.x_max, field.spec.y_min, field.spec.y_max};
  // Scale the median arrow to most of a grid cell.
  std::vector<double> norms;
  for (Index j = 0; j < field.values.cols(); ++j) norms.push_back(field.values.col(j).norm());
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double reference = median > 0.0 ? median : sorted.back();
  const double cell = std::min((field.spec.x_max - field.spec.x_min) /
                                   static_cast<double>(field.spec.nx - 1),
                               (field.spec.y_max - field.spec.y_min) /
                                   static_cast<double>(field.spec.ny - 1));
  const double scale = reference > 0.0 ? 0.8 * cell / reference : 0.0;

  std::string out;
  open_svg(out, title, f);
  for (Index j = 0; j < field.points.cols(); ++j) {
    const double x0 = field.points(0, j);
    const double y0 = field.points(1, j);
    const double x1 = x0 + scale * field.values(0, j);
    const double y1 = y0 + scale * field.values(1, j);
    out += "<line x1=\"" + num(f.px(x0)) + "\" y1=\"" + num(f.py(y0)) + "\" x2=\"" +
           num(f.px(x1)) + "\" y2=\"" + num(f.py(y1)) +
           "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    out += "<circle cx=\"" + num(f.px(x1)) + "\" cy=\"" + num(f.py(y1)) +
           "\" r=\"1.4\" fill=\"#333\"/>\n";
  }
  out += "</svg>\n";
  write_file(path, out);
}

}  // namespace brf
