#pragma once

#include "savnls/config.hpp"
#include "savnls/field.hpp"
#include "savnls/grid.hpp"
#include "savnls/groundstate.hpp"
#include "savnls/harness.hpp"
#include "savnls/initdata.hpp"
#include "savnls/model.hpp"
#include "savnls/sav.hpp"
#include "savnls/spectral.hpp"
#include "savnls/splitting.hpp"
