#pragma once

#include "bernphase/error.hpp"
#include "bernphase/measure.hpp"
#include "bernphase/distribution.hpp"
#include "bernphase/range_group.hpp"
#include "bernphase/tree.hpp"
#include "bernphase/action.hpp"
#include "bernphase/rng.hpp"
#include "bernphase/parallel.hpp"
#include "bernphase/field.hpp"
#include "bernphase/stats.hpp"
#include "bernphase/montecarlo.hpp"
#include "bernphase/recurrence.hpp"
#include "bernphase/percolation.hpp"
#include "bernphase/coupling.hpp"
#include "bernphase/classify.hpp"
#include "bernphase/json.hpp"
