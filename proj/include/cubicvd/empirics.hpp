#pragma once

#include "cubicvd/empirics/count.hpp"
#include "cubicvd/empirics/sweep.hpp"
