#pragma once

#include "galmod/abelian.hpp"
#include "galmod/cli.hpp"
#include "galmod/finite_module.hpp"
#include "galmod/group_ring.hpp"
#include "galmod/lattice.hpp"
#include "galmod/matrix.hpp"
#include "galmod/monoid.hpp"
#include "galmod/shift_lattices.hpp"
#include "galmod/spectrum.hpp"
#include "galmod/tate.hpp"
