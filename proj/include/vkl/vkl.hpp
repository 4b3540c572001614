#pragma once

#include "vkl/basis.hpp"
#include "vkl/errors.hpp"
#include "vkl/experiments.hpp"
#include "vkl/grid.hpp"
#include "vkl/hardy.hpp"
#include "vkl/kernels.hpp"
#include "vkl/means.hpp"
#include "vkl/table.hpp"
#include "vkl/transform.hpp"
