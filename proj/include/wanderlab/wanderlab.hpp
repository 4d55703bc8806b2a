#pragma once

// Umbrella header for the whole library.

#include "wanderlab/errors.hpp"
#include "wanderlab/hyperbolic.hpp"
#include "wanderlab/raster.hpp"
#include "wanderlab/domain.hpp"
#include "wanderlab/grid_metric.hpp"
#include "wanderlab/curves.hpp"
#include "wanderlab/blaschke.hpp"
#include "wanderlab/chain.hpp"
#include "wanderlab/classify.hpp"
#include "wanderlab/landau.hpp"
#include "wanderlab/joukowski.hpp"
#include "wanderlab/surgery.hpp"
#include "wanderlab/config.hpp"
#include "wanderlab/io.hpp"
