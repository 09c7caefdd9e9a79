#pragma once

#include <string>
#include <vector>

#include "slob/config.hpp"
#include "slob/pde.hpp"

namespace slob {

// Exchange-m value at t = 0 as reported in the figure panels:
//   contracting exchange -> its solved value grid (Y_0 = 0 normalization,
//     i.e. the reservation transfer is factored out);
//   passive exchange     -> fee-revenue utility -E[exp(-eta_m c_m F_T)]
//     under the regime's equilibrium quotes.
// Returned over the whole lattice.
Grid exchange_value_grid(const SolveResult& env, int m);

// Writes the selected figure panels (CSV + SVG) into cfg.out_dir; returns
// the file paths written. Panels: fig2a fig2b fig2c fig2d fig3a fig3b
// fig4a fig4b, or "all".
std::vector<std::string> run_figures(const RunConfig& cfg);

} // namespace slob
