#pragma once

#include "nctorus/error.hpp"
#include "nctorus/lattice.hpp"
#include "nctorus/algebra.hpp"
#include "nctorus/torus_matrix.hpp"
#include "nctorus/eigensolver.hpp"
#include "nctorus/compression.hpp"
#include "nctorus/calculus.hpp"
#include "nctorus/determinant.hpp"
#include "nctorus/geometry.hpp"
#include "nctorus/forms.hpp"
#include "nctorus/laplacian.hpp"
#include "nctorus/weyl.hpp"
#include "nctorus/oracle.hpp"
#include "nctorus/literal_io.hpp"
#include "nctorus/config.hpp"
