#pragma once

#include "claclab/ndiff/checkpoint.hpp"
#include "claclab/ndiff/mlp.hpp"
#include "claclab/ndiff/optim.hpp"
#include "claclab/ndiff/tensor.hpp"
