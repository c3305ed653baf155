#pragma once

#include "firefight/canonical.hpp"
#include "firefight/damage.hpp"
#include "firefight/engine.hpp"
#include "firefight/generators.hpp"
#include "firefight/graph.hpp"
#include "firefight/graph_io.hpp"
#include "firefight/ipgen.hpp"
#include "firefight/matching.hpp"
#include "firefight/parallel.hpp"
#include "firefight/reductions.hpp"
#include "firefight/solver.hpp"
#include "firefight/vertex_set.hpp"
