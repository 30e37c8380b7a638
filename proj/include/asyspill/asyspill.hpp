#pragma once

// Umbrella header.

#include "asyspill/asymmetry.hpp"
#include "asyspill/bootstrap.hpp"
#include "asyspill/calendar.hpp"
#include "asyspill/error.hpp"
#include "asyspill/format.hpp"
#include "asyspill/ingest.hpp"
#include "asyspill/measure_panel.hpp"
#include "asyspill/parallel.hpp"
#include "asyspill/realized.hpp"
#include "asyspill/spillover.hpp"
#include "asyspill/sv_model.hpp"
#include "asyspill/var_model.hpp"
#include "asyspill/version.hpp"
