#pragma once

#include "cubicvd/charfn/atoms.hpp"
#include "cubicvd/charfn/char_fn.hpp"
#include "cubicvd/charfn/decay.hpp"
