#pragma once

#include "wigner/config.hpp"
#include "wigner/error.hpp"
#include "wigner/lift_canonical.hpp"
#include "wigner/lift_common.hpp"
#include "wigner/lift_inductive.hpp"
#include "wigner/linalg.hpp"
#include "wigner/random.hpp"
#include "wigner/symmetry.hpp"
