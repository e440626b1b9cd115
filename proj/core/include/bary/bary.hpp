#pragma once

#include "bary/algorithms.hpp"
#include "bary/grid.hpp"
#include "bary/io.hpp"
#include "bary/lp.hpp"
#include "bary/measure.hpp"
#include "bary/numeric.hpp"
#include "bary/oracle.hpp"
#include "bary/point.hpp"
#include "bary/rat_lu.hpp"
#include "bary/simplex.hpp"
#include "bary/transport.hpp"
