#pragma once

#include "random.hpp"
#include "parallel.hpp"
#include "special.hpp"
#include "chamber.hpp"
#include "quadrature.hpp"
#include "kernels.hpp"
#include "matrix_model.hpp"
#include "diffusion.hpp"
#include "ensembles.hpp"
#include "branching.hpp"
#include "stats.hpp"
#include "generator.hpp"
#include "verify.hpp"
#include "io.hpp"
