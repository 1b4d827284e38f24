#pragma once

#include "dgwave/legendre.hpp"
#include "dgwave/projection.hpp"
#include "dgwave/spatial_fem.hpp"
#include "dgwave/problems.hpp"
#include "dgwave/slab_solver.hpp"
#include "dgwave/error_metrics.hpp"
#include "dgwave/study.hpp"
