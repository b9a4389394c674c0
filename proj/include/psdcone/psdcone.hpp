#pragma once

#include "psdcone/clifford_embedding.hpp"
#include "psdcone/configurations.hpp"
#include "psdcone/errors.hpp"
#include "psdcone/exterior_algebra.hpp"
#include "psdcone/matrix_core.hpp"
#include "psdcone/orthant_factorization.hpp"
#include "psdcone/psd_realization.hpp"
#include "psdcone/realization.hpp"
#include "psdcone/search.hpp"
