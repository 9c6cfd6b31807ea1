// SPDX-License-Identifier: Apache-2.0
#ifndef SATK_SATK_HPP
#define SATK_SATK_HPP

#include "errors.hpp"
#include "graded.hpp"
#include "linalg.hpp"
#include "spectral.hpp"
#include "resolution.hpp"
#include "power.hpp"
#include "shifts.hpp"
#include "semigroup.hpp"
#include "random.hpp"
#include "io.hpp"
#include "harness.hpp"

#endif
