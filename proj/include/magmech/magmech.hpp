#pragma once

#include "magmech/config.hpp"
#include "magmech/csv.hpp"
#include "magmech/drift.hpp"
#include "magmech/dynamics.hpp"
#include "magmech/elastic.hpp"
#include "magmech/errors.hpp"
#include "magmech/fitting.hpp"
#include "magmech/hybrid.hpp"
#include "magmech/params.hpp"
#include "magmech/spectrum.hpp"
#include "magmech/stability.hpp"
#include "magmech/steady_state.hpp"
#include "magmech/sweep.hpp"
#include "magmech/units.hpp"
#include "magmech/window.hpp"
