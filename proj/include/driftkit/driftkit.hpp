#pragma once

#include "driftkit/baselines.hpp"
#include "driftkit/detector.hpp"
#include "driftkit/evaluation.hpp"
#include "driftkit/generators.hpp"
#include "driftkit/hoeffding.hpp"
#include "driftkit/kde.hpp"
#include "driftkit/knowledge.hpp"
#include "driftkit/posterior.hpp"
#include "driftkit/scaling.hpp"
#include "driftkit/stats.hpp"
#include "driftkit/stream.hpp"
