#pragma once

// Umbrella header for the whole library.

#include "ves/calibration.hpp"
#include "ves/ces.hpp"
#include "ves/dynamics.hpp"
#include "ves/io.hpp"
#include "ves/montecarlo.hpp"
#include "ves/powerlaw.hpp"
#include "ves/rng.hpp"
#include "ves/version.hpp"
