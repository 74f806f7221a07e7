#pragma once

#include "core.hpp"
#include "problem.hpp"
#include "construction.hpp"
#include "local_search.hpp"
#include "path_relinking.hpp"
#include "elite_set.hpp"
#include "drivers.hpp"
#include "lop.hpp"
#include "maxcut.hpp"
#include "bench_io.hpp"
