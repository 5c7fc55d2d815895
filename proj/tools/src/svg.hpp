#pragma once

#include <ostream>

#include "crmadapt/sim/simulate.hpp"

namespace crmadapt::cli {

// Static line plot of y, y_m and e_y against t.
void write_svg(const sim::SimTrace& trace, std::ostream& os);

}  // namespace crmadapt::cli
