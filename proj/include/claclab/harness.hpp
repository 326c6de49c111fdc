#pragma once

#include "claclab/harness/aggregate.hpp"
#include "claclab/harness/experiment.hpp"
#include "claclab/harness/generalization.hpp"
#include "claclab/harness/metrics.hpp"
#include "claclab/harness/plot.hpp"
#include "claclab/harness/sweep.hpp"
#include "claclab/harness/worker_pool.hpp"
