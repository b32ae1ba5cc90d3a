#pragma once

#include "cubicvd/density/compare.hpp"
#include "cubicvd/density/grid.hpp"
#include "cubicvd/density/philox.hpp"
#include "cubicvd/density/sampler.hpp"
