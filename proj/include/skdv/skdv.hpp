#pragma once

#include "skdv/core/error.hpp"
#include "skdv/core/rational.hpp"
#include "skdv/core/field_table.hpp"
#include "skdv/core/diffpoly.hpp"
#include "skdv/core/render.hpp"
#include "skdv/core/dinv.hpp"
#include "skdv/variational/partial.hpp"
#include "skdv/variational/antiderivative.hpp"
#include "skdv/variational/euler.hpp"
#include "skdv/variational/lagrangian.hpp"
#include "skdv/brackets/poisson.hpp"
#include "skdv/brackets/weak.hpp"
#include "skdv/dba/dirac_bergmann.hpp"
#include "skdv/superspace/superspace.hpp"
#include "skdv/models/models.hpp"
#include "skdv/models/equivalence.hpp"
#include "skdv/dsl/parser.hpp"
