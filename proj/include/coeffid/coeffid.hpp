#pragma once

#include "core.hpp"
#include "counterexamples.hpp"
#include "forward1d.hpp"
#include "gmt.hpp"
#include "inverse1d.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "pwconst2d.hpp"
#include "random.hpp"
#include "stability.hpp"
