#include "slob/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slob/csv.hpp"

namespace slob {

namespace {

constexpr double W = 720, H = 480;
constexpr double ML = 80, MR = 170, MT = 48, MB = 64;

const char* palette(size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return colors[i % 8];
}

// round limits outward to a tidy tick step
void nice_axis(double lo, double hi, double& out_lo, double& out_hi, double& step) {
    if (!(hi > lo)) {
        const double pad = (std::abs(lo) > 1e-12 ? std::abs(lo) : 1.0) * 0.1;
        lo -= pad;
        hi += pad;
    }
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double s = raw / mag;
    step = (s < 1.5 ? 1.0 : s < 3.5 ? 2.0 : s < 7.5 ? 5.0 : 10.0) * mag;
    out_lo = std::floor(lo / step) * step;
    out_hi = std::ceil(hi / step) * step;
}

} // namespace

void SvgChart::add_series(std::string name, std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("SvgChart: x/y size mismatch");
    series_.push_back({std::move(name), std::move(xs), std::move(ys)});
}

void SvgChart::write(const std::string& path) const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series_)
        for (size_t i = 0; i < s.xs.size(); ++i) {
            xmin = std::min(xmin, s.xs[i]);
            xmax = std::max(xmax, s.xs[i]);
            ymin = std::min(ymin, s.ys[i]);
            ymax = std::max(ymax, s.ys[i]);
        }
    if (!std::isfinite(xmin)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    double xlo, xhi, xstep, ylo, yhi, ystep;
    nice_axis(xmin, xmax, xlo, xhi, xstep);
    nice_axis(ymin, ymax, ylo, yhi, ystep);

    auto px = [&](double x) { return ML + (x - xlo) / (xhi - xlo) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - ylo) / (yhi - ylo) * (H - MT - MB); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title_ << "</text>\n";

    // axes, ticks, grid
    out << "<g font-size=\"11\" font-family=\"sans-serif\" fill=\"black\">\n";
    for (double x = xlo; x <= xhi + xstep * 0.5; x += xstep) {
        out << "<line x1=\"" << px(x) << "\" y1=\"" << MT << "\" x2=\"" << px(x) << "\" y2=\""
            << H - MB << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << px(x) << "\" y=\"" << H - MB + 16
            << "\" text-anchor=\"middle\">" << fmt_num(x) << "</text>\n";
    }
    for (double y = ylo; y <= yhi + ystep * 0.5; y += ystep) {
        out << "<line x1=\"" << ML << "\" y1=\"" << py(y) << "\" x2=\"" << W - MR << "\" y2=\""
            << py(y) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << ML - 6 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\">" << fmt_num(y) << "</text>\n";
    }
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 16
        << "\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
    out << "<text x=\"18\" y=\"" << (MT + H - MB) / 2 << "\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << (MT + H - MB) / 2 << ")\">" << y_label_
        << "</text>\n";
    out << "</g>\n";

    for (size_t si = 0; si < series_.size(); ++si) {
        const auto& s = series_[si];
        out << "<polyline fill=\"none\" stroke=\"" << palette(si)
            << "\" stroke-width=\"1.8\" points=\"";
        for (size_t i = 0; i < s.xs.size(); ++i)
            out << fmt_num(px(s.xs[i])) << "," << fmt_num(py(s.ys[i])) << " ";
        out << "\"/>\n";
        const double ly = MT + 18 + 18 * static_cast<double>(si);
        out << "<line x1=\"" << W - MR + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - MR + 34
            << "\" y2=\"" << ly << "\" stroke=\"" << palette(si) << "\" stroke-width=\"1.8\"/>\n";
        out << "<text x=\"" << W - MR + 40 << "\" y=\"" << ly + 4
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << out.str();
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " into place");
}

} // namespace slob
