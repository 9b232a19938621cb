#pragma once

// Umbrella header for the whole library.

#include "pa2d/archive.hpp"
#include "pa2d/config.hpp"
#include "pa2d/core.hpp"
#include "pa2d/evolution.hpp"
#include "pa2d/io.hpp"
#include "pa2d/momdp.hpp"
#include "pa2d/pareto.hpp"
#include "pa2d/policy.hpp"
#include "pa2d/run.hpp"
