#pragma once

#include "cqcap/bounds.hpp"
#include "cqcap/capacities.hpp"
#include "cqcap/common.hpp"
#include "cqcap/dmcsim.hpp"
#include "cqcap/exponents.hpp"
#include "cqcap/io.hpp"
#include "cqcap/optical.hpp"
#include "cqcap/spectral.hpp"
