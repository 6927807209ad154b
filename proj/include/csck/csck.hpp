#pragma once

#include "csck/error.hpp"
#include "csck/poly.hpp"
#include "csck/reduction.hpp"
#include "csck/classify.hpp"
#include "csck/quadrature.hpp"
#include "csck/geometry.hpp"
#include "csck/lemmas.hpp"
#include "csck/catalog.hpp"
