#pragma once

// Umbrella header.

#include "qgfilter/ab_loop.hpp"
#include "qgfilter/conditions.hpp"
#include "qgfilter/coupling.hpp"
#include "qgfilter/delta_approx.hpp"
#include "qgfilter/direct.hpp"
#include "qgfilter/dtn.hpp"
#include "qgfilter/errors.hpp"
#include "qgfilter/filters.hpp"
#include "qgfilter/graph.hpp"
#include "qgfilter/graph_io.hpp"
#include "qgfilter/units.hpp"
