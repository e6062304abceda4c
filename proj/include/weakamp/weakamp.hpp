#pragma once

// Umbrella header for the weak-measurement amplification library.

#include "weakamp/errors.hpp"
#include "weakamp/pointer_algebra.hpp"
#include "weakamp/weak_core.hpp"
#include "weakamp/optomech_closed.hpp"
#include "weakamp/optomech_damped.hpp"
#include "weakamp/detection_stats.hpp"
#include "weakamp/fock_oracle.hpp"
#include "weakamp/oracle_check.hpp"
#include "weakamp/sweep.hpp"
#include "weakamp/figures.hpp"
