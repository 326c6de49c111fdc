#pragma once

#include "claclab/envs/any_env.hpp"
#include "claclab/envs/env.hpp"
#include "claclab/envs/nchain.hpp"
#include "claclab/envs/pendulum.hpp"
#include "claclab/envs/resample.hpp"
