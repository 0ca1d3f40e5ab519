#pragma once

#include "orthodraw/error.hpp"
#include "orthodraw/numeric.hpp"
#include "orthodraw/eutaxy.hpp"
#include "orthodraw/simplexform.hpp"
#include "orthodraw/shapes.hpp"
#include "orthodraw/construct.hpp"
