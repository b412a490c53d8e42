#pragma once

#include "svcid/config.hpp"
#include "svcid/evaluate.hpp"
#include "svcid/io.hpp"
#include "svcid/metrics.hpp"
#include "svcid/predictor.hpp"
#include "svcid/rng.hpp"
#include "svcid/scenario.hpp"
#include "svcid/scheduler.hpp"
#include "svcid/timing.hpp"
