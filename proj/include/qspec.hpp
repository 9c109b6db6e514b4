#pragma once

#include "qspec/cauchy_kernel.hpp"
#include "qspec/errors.hpp"
#include "qspec/qmatrix.hpp"
#include "qspec/quadrature.hpp"
#include "qspec/quaternion.hpp"
#include "qspec/random.hpp"
#include "qspec/s_calculus.hpp"
#include "qspec/slice_regular.hpp"
