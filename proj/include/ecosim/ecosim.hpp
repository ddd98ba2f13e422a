#pragma once

// Umbrella header.

#include "ecosim/config.hpp"
#include "ecosim/core.hpp"
#include "ecosim/ecosystem.hpp"
#include "ecosim/errors.hpp"
#include "ecosim/evolution.hpp"
#include "ecosim/habitat.hpp"
#include "ecosim/metrics.hpp"
#include "ecosim/rng.hpp"
