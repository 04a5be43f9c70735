#pragma once

// Umbrella header: the whole numerical laboratory for operator monotone,
// operator convex, and strongly operator convex functions.

#include "opfunc/certify.hpp"
#include "opfunc/construct.hpp"
#include "opfunc/errors.hpp"
#include "opfunc/expr.hpp"
#include "opfunc/interval.hpp"
#include "opfunc/kernels.hpp"
#include "opfunc/matrix.hpp"
#include "opfunc/opineq.hpp"
#include "opfunc/parse.hpp"
#include "opfunc/report.hpp"
#include "opfunc/repr.hpp"
#include "opfunc/rng.hpp"
#include "opfunc/version.hpp"
