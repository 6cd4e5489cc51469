#pragma once

#include "algebra.hpp"
#include "clone.hpp"
#include "error.hpp"
#include "free_semigroup.hpp"
#include "generation.hpp"
#include "io.hpp"
#include "morphism.hpp"
#include "parallel.hpp"
#include "presets.hpp"
#include "product.hpp"
#include "reduced_power.hpp"
#include "satisfaction.hpp"
#include "signature.hpp"
#include "term.hpp"
