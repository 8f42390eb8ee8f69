#pragma once

#include "bpsrh/bps_structure.hpp"
#include "bpsrh/complex_ops.hpp"
#include "bpsrh/connection_flatness.hpp"
#include "bpsrh/errors.hpp"
#include "bpsrh/integral_oracle.hpp"
#include "bpsrh/io.hpp"
#include "bpsrh/lambda_kernel.hpp"
#include "bpsrh/quadrature.hpp"
#include "bpsrh/rh_solver.hpp"
#include "bpsrh/special_functions.hpp"
