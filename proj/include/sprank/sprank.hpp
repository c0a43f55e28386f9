#pragma once

// Exact strength / partition-rank toolkit: fields, forms, tensors,
// certificate-producing rank search, field-extension descent, equation mining
// and the explicit bound calculators.

#include "sprank/derivspace.hpp"
#include "sprank/descent.hpp"
#include "sprank/enumerate.hpp"
#include "sprank/eqmine.hpp"
#include "sprank/error.hpp"
#include "sprank/field.hpp"
#include "sprank/io.hpp"
#include "sprank/linalg.hpp"
#include "sprank/poly.hpp"
#include "sprank/randgen.hpp"
#include "sprank/ranksearch.hpp"
#include "sprank/ranktypes.hpp"
#include "sprank/rng.hpp"
#include "sprank/symmetrize.hpp"
#include "sprank/tensor.hpp"
#include "sprank/verify.hpp"
