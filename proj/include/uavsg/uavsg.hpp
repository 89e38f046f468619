#pragma once

#include "uavsg/analytic.hpp"
#include "uavsg/association.hpp"
#include "uavsg/backhaul.hpp"
#include "uavsg/config_io.hpp"
#include "uavsg/csv.hpp"
#include "uavsg/error.hpp"
#include "uavsg/figures.hpp"
#include "uavsg/model.hpp"
#include "uavsg/montecarlo.hpp"
#include "uavsg/quadrature.hpp"
#include "uavsg/specfun.hpp"
#include "uavsg/sweep.hpp"
