#pragma once

#include "arlkit/errors.hpp"
#include "arlkit/estimate.hpp"
#include "arlkit/exact.hpp"
#include "arlkit/model.hpp"
#include "arlkit/montecarlo.hpp"
#include "arlkit/mvncdf.hpp"
#include "arlkit/normal.hpp"
#include "arlkit/random.hpp"
#include "arlkit/series.hpp"
