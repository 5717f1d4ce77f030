#pragma once

#include "common.hpp"
#include "rational.hpp"
#include "parallel.hpp"
#include "summation.hpp"
#include "digitcore.hpp"
#include "counting.hpp"
#include "expsum.hpp"
#include "phase_vector.hpp"
#include "gowers.hpp"
#include "farey.hpp"
#include "exponents.hpp"
#include "appendix.hpp"
