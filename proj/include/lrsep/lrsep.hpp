#pragma once

#include "lrsep/errors.hpp"
#include "lrsep/precision.hpp"
#include "lrsep/linalg.hpp"
#include "lrsep/moments.hpp"
#include "lrsep/rng.hpp"
#include "lrsep/parallel.hpp"
#include "lrsep/reservoir.hpp"
#include "lrsep/moment_matrix.hpp"
#include "lrsep/spectral.hpp"
#include "lrsep/separation.hpp"
#include "lrsep/io.hpp"
