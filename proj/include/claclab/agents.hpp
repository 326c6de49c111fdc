#pragma once

#include "claclab/agents/agent.hpp"
#include "claclab/agents/checkpoint.hpp"
#include "claclab/agents/config.hpp"
#include "claclab/agents/losses.hpp"
#include "claclab/agents/network_set.hpp"
