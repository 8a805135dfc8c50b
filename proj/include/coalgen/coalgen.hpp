#pragma once

// Umbrella header: pulls in the whole library.

#include "coalgen/annotation.hpp"
#include "coalgen/asset_engine.hpp"
#include "coalgen/ce.hpp"
#include "coalgen/ce_model.hpp"
#include "coalgen/config.hpp"
#include "coalgen/defaults.hpp"
#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"
#include "coalgen/fact_engine.hpp"
#include "coalgen/pipeline.hpp"
#include "coalgen/policy.hpp"
#include "coalgen/rng.hpp"
#include "coalgen/version.hpp"
