#pragma once

#include "evdom/checkers.hpp"
#include "evdom/errors.hpp"
#include "evdom/evolution.hpp"
#include "evdom/grid.hpp"
#include "evdom/lattice.hpp"
#include "evdom/matrix_market.hpp"
#include "evdom/operators.hpp"
#include "evdom/parallel.hpp"
#include "evdom/reporting.hpp"
#include "evdom/scenarios.hpp"
#include "evdom/spectral.hpp"
