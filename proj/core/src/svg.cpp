#include "tsadam/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tsadam/csvio.hpp"
#include "tsadam/errors.hpp"

namespace tsadam::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct Ticks {
    double lo, hi, step;
};

// Expand [lo, hi] to a 1/2/5 grid that looks reasonable on an axis.
Ticks nice_ticks(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double raw = (hi - lo) / 4.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

std::string tick_label(double v) {
    // Snap values that are tick arithmetic away from round numbers.
    const double snapped = std::abs(v) < 1e-12 ? 0.0 : v;
    return csv::format_double(snapped);
}

}  // namespace

void LinePlot::add(std::string label, std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("line plot: x/y length mismatch");
    }
    if (x.empty()) return;
    series_.push_back({std::move(label), std::move(x), std::move(y)});
}

void LinePlot::write(const std::string& path, int width, int height) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    const double ml = 64, mr = 16, mt = 32, mb = 46;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const Series& s : series_) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double xv = log_x_ ? std::log10(std::max(s.x[i], 1e-300)) : s.x[i];
            if (first) {
                xmin = xmax = xv;
                ymin = ymax = s.y[i];
                first = false;
            } else {
                xmin = std::min(xmin, xv);
                xmax = std::max(xmax, xv);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    const Ticks xt = log_x_ ? Ticks{std::floor(xmin), std::ceil(std::max(xmax, xmin + 1.0)), 1.0}
                            : nice_ticks(xmin, xmax);
    const Ticks yt = nice_ticks(ymin, ymax);

    const auto sx = [&](double v) {
        const double xv = log_x_ ? std::log10(std::max(v, 1e-300)) : v;
        return ml + (xv - xt.lo) / (xt.hi - xt.lo) * pw;
    };
    const auto sy = [&](double v) {
        return mt + ph - (v - yt.lo) / (yt.hi - yt.lo) * ph;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">" << title_ << "</text>\n";

    out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (double v = xt.lo; v <= xt.hi + 1e-9 * xt.step; v += xt.step) {
        const double px = ml + (v - xt.lo) / (xt.hi - xt.lo) * pw;
        out << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px
            << "\" y2=\"" << mt + ph << "\"/>\n";
    }
    for (double v = yt.lo; v <= yt.hi + 1e-9 * yt.step; v += yt.step) {
        const double py = sy(v);
        out << "<line x1=\"" << ml << "\" y1=\"" << py << "\" x2=\"" << ml + pw
            << "\" y2=\"" << py << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (double v = xt.lo; v <= xt.hi + 1e-9 * xt.step; v += xt.step) {
        const double px = ml + (v - xt.lo) / (xt.hi - xt.lo) * pw;
        const std::string label = log_x_ ? "1e" + tick_label(v) : tick_label(v);
        out << "<text x=\"" << px << "\" y=\"" << mt + ph + 16
            << "\" text-anchor=\"middle\">" << label << "</text>\n";
    }
    for (double v = yt.lo; v <= yt.hi + 1e-9 * yt.step; v += yt.step) {
        out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(v) + 4
            << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
    out << "<text x=\"14\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << mt + ph / 2
        << ")\">" << y_label_ << "</text>\n</g>\n";

    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (size_t i = 0; i < series_.size(); ++i) {
        const Series& s = series_[i];
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.6\" points=\"";
        for (size_t p = 0; p < s.x.size(); ++p) {
            out << sx(s.x[p]) << ',' << sy(s.y[p]) << ' ';
        }
        out << "\"/>\n";
        const double lx = ml + pw - 150, ly = mt + 16 + 16 * static_cast<double>(i);
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n<text x=\"" << lx + 28 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
            << "</text>\n";
    }
    out << "</svg>\n";
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace tsadam::svg
