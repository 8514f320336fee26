#pragma once

#include "dyadic/harness_config.hpp"
#include "dyadic/harness_types.hpp"
#include "dyadic/harness_checks.hpp"
#include "dyadic/harness_run.hpp"
