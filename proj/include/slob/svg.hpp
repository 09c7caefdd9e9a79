#pragma once

#include <string>
#include <vector>

namespace slob {

// Minimal polyline chart writer: axes, ticks, legend, title. Output is a
// pure function of the added series, so identical data gives identical
// bytes.
class SvgChart {
public:
    SvgChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(std::string name, std::vector<double> xs, std::vector<double> ys);
    void write(const std::string& path) const;

private:
    std::string title_, x_label_, y_label_;
    struct Series {
        std::string name;
        std::vector<double> xs, ys;
    };
    std::vector<Series> series_;
};

} // namespace slob
