#pragma once

// Umbrella header for the energy-community duty-cycle simulator.

#include "ecsim/agent.hpp"
#include "ecsim/analysis.hpp"
#include "ecsim/config.hpp"
#include "ecsim/cost.hpp"
#include "ecsim/engine.hpp"
#include "ecsim/io.hpp"
#include "ecsim/manager.hpp"
#include "ecsim/oracle.hpp"
#include "ecsim/population.hpp"
#include "ecsim/rng.hpp"
