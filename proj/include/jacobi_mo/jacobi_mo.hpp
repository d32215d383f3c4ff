#pragma once

#include "jacobi_mo/errors.hpp"
#include "jacobi_mo/gradients.hpp"
#include "jacobi_mo/inverse.hpp"
#include "jacobi_mo/linalg.hpp"
#include "jacobi_mo/mo_map.hpp"
#include "jacobi_mo/potential.hpp"
#include "jacobi_mo/quasimomentum.hpp"
#include "jacobi_mo/recurrence.hpp"
#include "jacobi_mo/spectrum.hpp"
