#pragma once

#include "gfs/chaotic.hpp"
#include "gfs/design.hpp"
#include "gfs/digest.hpp"
#include "gfs/error.hpp"
#include "gfs/estimator.hpp"
#include "gfs/grid.hpp"
#include "gfs/io.hpp"
#include "gfs/layout.hpp"
#include "gfs/optimizer.hpp"
#include "gfs/oracle.hpp"
#include "gfs/plot.hpp"
#include "gfs/rng.hpp"
