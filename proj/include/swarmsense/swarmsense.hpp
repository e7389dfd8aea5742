#pragma once

#include "swarmsense/config.hpp"
#include "swarmsense/energy.hpp"
#include "swarmsense/epos.hpp"
#include "swarmsense/errors.hpp"
#include "swarmsense/mission.hpp"
#include "swarmsense/pipeline.hpp"
#include "swarmsense/plan.hpp"
#include "swarmsense/plangen.hpp"
#include "swarmsense/report.hpp"
#include "swarmsense/rng.hpp"
#include "swarmsense/sensing_map.hpp"
#include "swarmsense/serialize.hpp"
