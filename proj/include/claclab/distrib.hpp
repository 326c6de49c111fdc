#pragma once

#include "claclab/distrib/discrete.hpp"
#include "claclab/distrib/gaussian.hpp"
#include "claclab/distrib/marginal.hpp"
