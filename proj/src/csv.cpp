#include "slob/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace slob {

std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        for (size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
        f << "\n";
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
            f << "\n";
        }
        if (!f) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " into place");
}

std::vector<std::string> solve_csv_header() {
    std::vector<std::string> h = {"t", "q0", "q1", "v0", "v1"};
    for (int l = 0; l < 2; ++l) {
        for (Side k : both_sides)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    h.push_back("z" + std::to_string(l) + "_" + side_name(k) + std::to_string(i) +
                                std::to_string(j));
        h.push_back("z" + std::to_string(l) + "_S");
    }
    return h;
}

void write_solve_csv(const std::string& path, const SolveResult& result,
                     const std::vector<double>& times) {
    std::vector<std::vector<std::string>> rows;
    for (double t : times) {
        const int s = result.slice_index(t);
        const double ts = result.slice_time(s);
        for (int idx = 0; idx < result.lattice.size(); ++idx) {
            const InventoryPair q = result.lattice.state(idx);
            const StateRates z = result.rates_at(s, q);
            std::vector<std::string> row = {fmt_num(ts), std::to_string(q.q0),
                                            std::to_string(q.q1),
                                            fmt_num(result.slices[s][0][idx]),
                                            fmt_num(result.slices[s][1][idx])};
            for (const RateVector* zv : {&z.z0, &z.z1}) {
                for (Side k : both_sides)
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) row.push_back(fmt_num(zv->at(k, i, j)));
                row.push_back(fmt_num(zv->zS));
            }
            rows.push_back(std::move(row));
        }
    }
    write_csv(path, solve_csv_header(), rows);
}

} // namespace slob
