#pragma once

#include "susypiv/checks.hpp"
#include "susypiv/csv.hpp"
#include "susypiv/error.hpp"
#include "susypiv/grid.hpp"
#include "susypiv/jet.hpp"
#include "susypiv/painleve.hpp"
#include "susypiv/precision.hpp"
#include "susypiv/seeds.hpp"
#include "susypiv/series.hpp"
#include "susypiv/special.hpp"
#include "susypiv/spectra.hpp"
#include "susypiv/susy.hpp"
#include "susypiv/wronskian.hpp"
