#pragma once

#include "cubicvd/eisenstein/integer.hpp"
#include "cubicvd/eisenstein/rational_primes.hpp"
#include "cubicvd/eisenstein/prime_ideals.hpp"
#include "cubicvd/eisenstein/factorization.hpp"
#include "cubicvd/eisenstein/family.hpp"
#include "cubicvd/eisenstein/ideals.hpp"
#include "cubicvd/eisenstein/csv.hpp"
