#pragma once

// Umbrella header for the self-avoiding walk laboratory.

#include "saw/count_table.hpp"
#include "saw/enumerate.hpp"
#include "saw/lattice.hpp"
#include "saw/mvm.hpp"
#include "saw/numeric.hpp"
#include "saw/patterns.hpp"
#include "saw/sampler.hpp"
#include "saw/verify.hpp"
#include "saw/walk.hpp"
