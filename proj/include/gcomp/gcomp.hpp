#pragma once

#include "gcomp/errors.hpp"
#include "gcomp/ode.hpp"
#include "gcomp/warping.hpp"
#include "gcomp/geodesic.hpp"
#include "gcomp/distance.hpp"
#include "gcomp/sturm.hpp"
#include "gcomp/triangle.hpp"
#include "gcomp/testbed.hpp"
#include "gcomp/suites.hpp"
