#pragma once

#include "dtspan/error.hpp"
#include "dtspan/rational.hpp"
#include "dtspan/metric.hpp"
#include "dtspan/geometry.hpp"
#include "dtspan/lp.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/complex.hpp"
#include "dtspan/tree.hpp"
#include "dtspan/flow.hpp"
#include "dtspan/random.hpp"
#include "dtspan/io.hpp"
