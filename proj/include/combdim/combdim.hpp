#pragma once

#include "combdim/bounds.hpp"
#include "combdim/cantor.hpp"
#include "combdim/comb_domain.hpp"
#include "combdim/curve.hpp"
#include "combdim/dimension.hpp"
#include "combdim/error.hpp"
#include "combdim/estimate.hpp"
#include "combdim/experiment.hpp"
#include "combdim/geometry.hpp"
#include "combdim/io.hpp"
#include "combdim/parallel.hpp"
#include "combdim/quadrature.hpp"
#include "combdim/raster.hpp"
#include "combdim/two_sided.hpp"
