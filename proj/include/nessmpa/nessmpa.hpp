// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nessmpa/boundary.hpp"
#include "nessmpa/dense_oracle.hpp"
#include "nessmpa/errors.hpp"
#include "nessmpa/helix.hpp"
#include "nessmpa/lax.hpp"
#include "nessmpa/mpa.hpp"
#include "nessmpa/scalar_algebra.hpp"
#include "nessmpa/verifier.hpp"
