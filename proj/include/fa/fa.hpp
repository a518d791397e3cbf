#pragma once

#include "fa/capacity.hpp"
#include "fa/catalog.hpp"
#include "fa/closure.hpp"
#include "fa/enumerate.hpp"
#include "fa/errors.hpp"
#include "fa/eval.hpp"
#include "fa/experiments.hpp"
#include "fa/io.hpp"
#include "fa/parallel.hpp"
#include "fa/report.hpp"
#include "fa/rng.hpp"
#include "fa/solvers.hpp"
#include "fa/types.hpp"
