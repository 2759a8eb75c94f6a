#pragma once

// Limiting distributions of the rescaled maximum of partial sums of
// exchangeable random variables, with deterministic replication-parallel
// Monte Carlo verification.

#include "exlimit/engine.hpp"
#include "exlimit/errors.hpp"
#include "exlimit/format.hpp"
#include "exlimit/limit_laws.hpp"
#include "exlimit/measures.hpp"
#include "exlimit/normal.hpp"
#include "exlimit/probability.hpp"
#include "exlimit/quadrature.hpp"
#include "exlimit/random.hpp"
#include "exlimit/runner.hpp"
#include "exlimit/scenario.hpp"
#include "exlimit/verify.hpp"
