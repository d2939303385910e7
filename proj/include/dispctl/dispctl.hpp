#pragma once

#include "dispctl/biorthogonal.hpp"
#include "dispctl/control_shape.hpp"
#include "dispctl/dynamics.hpp"
#include "dispctl/errors.hpp"
#include "dispctl/fourier.hpp"
#include "dispctl/io.hpp"
#include "dispctl/moment.hpp"
#include "dispctl/propagate.hpp"
#include "dispctl/quadrature.hpp"
#include "dispctl/spectrum.hpp"
#include "dispctl/symbols.hpp"
