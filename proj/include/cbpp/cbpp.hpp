#pragma once

// Umbrella header for the whole toolkit.

#include "cbpp/bench.hpp"
#include "cbpp/bounds.hpp"
#include "cbpp/branch_and_bound.hpp"
#include "cbpp/decompose.hpp"
#include "cbpp/errors.hpp"
#include "cbpp/external.hpp"
#include "cbpp/formulations.hpp"
#include "cbpp/generators.hpp"
#include "cbpp/graphs.hpp"
#include "cbpp/instance.hpp"
#include "cbpp/model.hpp"
#include "cbpp/multiset.hpp"
#include "cbpp/oracle.hpp"
#include "cbpp/points.hpp"
#include "cbpp/rng.hpp"
#include "cbpp/simplex.hpp"
#include "cbpp/solution.hpp"
#include "cbpp/solve.hpp"
