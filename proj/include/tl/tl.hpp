#pragma once

#include "errors.hpp"
#include "matrix.hpp"
#include "linalg.hpp"
#include "complex.hpp"
#include "torsion.hpp"
#include "filtered.hpp"
#include "poincare.hpp"
#include "random.hpp"
#include "io.hpp"
#include "compute.hpp"
#include "fixtures.hpp"
#include "suites.hpp"
