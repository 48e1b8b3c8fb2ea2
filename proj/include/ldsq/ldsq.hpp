#pragma once

#include "ldsq/scalar.hpp"
#include "ldsq/matrix.hpp"
#include "ldsq/lorentz_core.hpp"
#include "ldsq/qr.hpp"
#include "ldsq/mappings.hpp"
#include "ldsq/normalizer.hpp"
#include "ldsq/verifier.hpp"
#include "ldsq/fibers.hpp"
#include "ldsq/io.hpp"
