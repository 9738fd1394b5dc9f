#pragma once

#include "gapgauge/error.hpp"
#include "gapgauge/gaps.hpp"
#include "gapgauge/harness.hpp"
#include "gapgauge/imputers/arima.hpp"
#include "gapgauge/imputers/gbt.hpp"
#include "gapgauge/imputers/grid_search.hpp"
#include "gapgauge/imputers/imputer.hpp"
#include "gapgauge/imputers/polynomial.hpp"
#include "gapgauge/imputers/seasonal_naive.hpp"
#include "gapgauge/metrics.hpp"
#include "gapgauge/random.hpp"
#include "gapgauge/rank.hpp"
#include "gapgauge/series.hpp"
#include "gapgauge/synth.hpp"
