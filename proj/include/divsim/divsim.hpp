#pragma once

#include "divsim/core.hpp"
#include "divsim/engine.hpp"
#include "divsim/io.hpp"
#include "divsim/report.hpp"
#include "divsim/rng.hpp"
#include "divsim/stats.hpp"
#include "divsim/sweep.hpp"
#include "divsim/teamgen.hpp"
