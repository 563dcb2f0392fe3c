#pragma once

// Umbrella header for the nlsgs library.

#include "config.hpp"
#include "dynamics.hpp"
#include "field_io.hpp"
#include "functional.hpp"
#include "grid.hpp"
#include "hypotheses.hpp"
#include "nonlinearity.hpp"
#include "nonlinearity_io.hpp"
#include "properties.hpp"
#include "rearrange.hpp"
#include "report.hpp"
#include "runner.hpp"
#include "soliton.hpp"
#include "solver.hpp"
