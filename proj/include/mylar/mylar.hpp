#pragma once

#include "mylar/errors.hpp"
#include "mylar/specfun.hpp"
#include "mylar/geometry.hpp"
#include "mylar/potential.hpp"
#include "mylar/dynamics.hpp"
#include "mylar/quadrature.hpp"
#include "mylar/action.hpp"
#include "mylar/verify.hpp"
