#pragma once

#include "boolperc/analysis.hpp"
#include "boolperc/cluster.hpp"
#include "boolperc/convex_body.hpp"
#include "boolperc/criteria.hpp"
#include "boolperc/diameter.hpp"
#include "boolperc/errors.hpp"
#include "boolperc/gjk.hpp"
#include "boolperc/grain_law.hpp"
#include "boolperc/intersection.hpp"
#include "boolperc/linalg.hpp"
#include "boolperc/parallel.hpp"
#include "boolperc/process.hpp"
#include "boolperc/rng.hpp"
#include "boolperc/spatial_index.hpp"
#include "boolperc/tail_index.hpp"
#include "boolperc/volume.hpp"
