#pragma once

// Exact computation for noncommutative tori and their finite cyclic
// orbifolds: pfaffian minors, trace ranges, the module-extension condition,
// Morita range comparison, and a numerical realization of the Heisenberg
// module with its covariance test battery.

#include "nctorus/errors.hpp"
#include "nctorus/rational.hpp"
#include "nctorus/unipoly.hpp"
#include "nctorus/symbolic.hpp"
#include "nctorus/number_field.hpp"
#include "nctorus/scalar.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/skew_matrix.hpp"
#include "nctorus/so_nn.hpp"
#include "nctorus/group_action.hpp"
#include "nctorus/trace_range.hpp"
#include "nctorus/heisenberg.hpp"

namespace nctorus {
inline constexpr const char* version = "1.0.0";
}
