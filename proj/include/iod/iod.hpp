#pragma once

// Umbrella header for the block order decomposition library.

#include "iod/element.hpp"
#include "iod/lazy.hpp"
#include "iod/matrix.hpp"
#include "iod/models.hpp"
#include "iod/monotone.hpp"
#include "iod/projections.hpp"
#include "iod/rng.hpp"
#include "iod/serialization.hpp"
#include "iod/suites.hpp"
