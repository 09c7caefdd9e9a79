#pragma once

#include <string>
#include <vector>

#include "slob/pde.hpp"

namespace slob {

// "%.12g" with '.' decimal separator, locale-independent.
std::string fmt_num(double x);

// Comma-separated table with a mandatory header row; written atomically
// (temp file + rename) so partially written panels never appear.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// SolveResult slice dump at the requested times (nearest stored slices):
// columns t,q0,q1,v0,v1 then the reconstructed payment-rate fields
// z{l}_{side}{maker}{venue} for l = 0,1 and z{l}_S.
void write_solve_csv(const std::string& path, const SolveResult& result,
                     const std::vector<double>& times);

std::vector<std::string> solve_csv_header();

} // namespace slob
