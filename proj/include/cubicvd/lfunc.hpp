#pragma once

#include "cubicvd/lfunc/lambda.hpp"
#include "cubicvd/lfunc/series.hpp"
#include "cubicvd/lfunc/tail.hpp"
#include "cubicvd/lfunc/types.hpp"
