#pragma once

#include "crmadapt/state_space.hpp"

namespace crmadapt::lintf {

// Matrix exponential by scaling and squaring with a degree-13 Pade approximant.
Matrix expm(const Matrix& A);

}  // namespace crmadapt::lintf
