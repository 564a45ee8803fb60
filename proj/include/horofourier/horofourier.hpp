#pragma once

#include "horofourier/boundary_modes.hpp"
#include "horofourier/errors.hpp"
#include "horofourier/euclidean.hpp"
#include "horofourier/geometry.hpp"
#include "horofourier/invariant_operators.hpp"
#include "horofourier/paley_wiener.hpp"
#include "horofourier/polynomial.hpp"
#include "horofourier/report.hpp"
#include "horofourier/test_function.hpp"
#include "horofourier/transform.hpp"
#include "horofourier/zonal.hpp"
