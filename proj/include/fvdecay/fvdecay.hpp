#pragma once

#include "fvdecay/errors.hpp"
#include "fvdecay/mesh.hpp"
#include "fvdecay/quadrature.hpp"
#include "fvdecay/scalar_ineq.hpp"
#include "fvdecay/functional_ineq.hpp"
#include "fvdecay/reference.hpp"
#include "fvdecay/scheme.hpp"
#include "fvdecay/entropy.hpp"
#include "fvdecay/region.hpp"
#include "fvdecay/io.hpp"
#include "fvdecay/experiment.hpp"
#include "fvdecay/verify.hpp"
