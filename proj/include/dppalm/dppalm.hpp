#pragma once

#include "dppalm/errors.hpp"
#include "dppalm/numerics/special.hpp"
#include "dppalm/numerics/linalg.hpp"
#include "dppalm/numerics/quadrature.hpp"
#include "dppalm/kernel.hpp"
#include "dppalm/repulsiveness.hpp"
#include "dppalm/finite_dpp.hpp"
#include "dppalm/sampling.hpp"
#include "dppalm/coupling.hpp"
#include "dppalm/models/euclidean.hpp"
#include "dppalm/models/sphere.hpp"
#include "dppalm/analysis/moments.hpp"
#include "dppalm/analysis/discretize.hpp"
#include "dppalm/analysis/mc_validate.hpp"
