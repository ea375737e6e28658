#pragma once

#include <string>
#include <vector>

namespace tsadam::svg {

// Minimal polyline plot writer: axes, nice ticks, a small legend, one
// polyline per series. CSV stays the canonical output format; these files
// are side-by-side visual aids only.
class LinePlot {
  public:
    LinePlot(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)),
          y_label_(std::move(y_label)) {}

    void add(std::string label, std::vector<double> x, std::vector<double> y);
    void log_x(bool on) { log_x_ = on; }

    void write(const std::string& path, int width = 720, int height = 440) const;

  private:
    struct Series {
        std::string label;
        std::vector<double> x, y;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    bool log_x_ = false;
};

}  // namespace tsadam::svg
