#pragma once

// Umbrella header: the whole library in one include.

#include "structura/rational.hpp"
#include "structura/core.hpp"
#include "structura/constructors.hpp"
#include "structura/axioms.hpp"
#include "structura/coupling.hpp"
#include "structura/classify.hpp"
#include "structura/morphisms.hpp"
#include "structura/quotient.hpp"
#include "structura/search.hpp"
#include "structura/io.hpp"
