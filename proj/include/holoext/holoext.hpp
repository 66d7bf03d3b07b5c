#pragma once

#include "holoext/core.hpp"
#include "holoext/poly.hpp"
#include "holoext/domains.hpp"
#include "holoext/search.hpp"
#include "holoext/hyperbolic.hpp"
#include "holoext/pick_kernels.hpp"
#include "holoext/operator_model.hpp"
#include "holoext/extension_lab.hpp"
