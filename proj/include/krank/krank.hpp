#pragma once

// Umbrella header.

#include "krank/bigint.hpp"
#include "krank/core.hpp"
#include "krank/dp.hpp"
#include "krank/enumeration.hpp"
#include "krank/gf.hpp"
#include "krank/hashing.hpp"
#include "krank/matrix_io.hpp"
#include "krank/oracle.hpp"
#include "krank/runner.hpp"
#include "krank/verifiers.hpp"
