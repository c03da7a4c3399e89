#ifndef PERCAP_EXPERIMENTS_HPP
#define PERCAP_EXPERIMENTS_HPP

#include <ostream>
#include <vector>

#include "percap/scenario.hpp"

namespace percap {

// Multiplication-count table: one row per n in n_grid (subset of {2..8}) with
// the six closed-form counts; instrumented counts are appended for n <= 6 and
// verified against the formulas.
void run_complexity(const std::vector<int>& n_grid, std::ostream& out);

// Dispatches on scenario.experiment and writes one CSV table. Identical
// scenario and seed produce byte-identical output.
void run_experiment(const Scenario& scenario, std::ostream& out);

} // namespace percap

#endif
