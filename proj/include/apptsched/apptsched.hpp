#pragma once

#include "apptsched/analytics.hpp"
#include "apptsched/bop.hpp"
#include "apptsched/errors.hpp"
#include "apptsched/estimate.hpp"
#include "apptsched/experiment.hpp"
#include "apptsched/io.hpp"
#include "apptsched/model.hpp"
#include "apptsched/montecarlo.hpp"
#include "apptsched/oracle.hpp"
#include "apptsched/qsim.hpp"
#include "apptsched/rng.hpp"
#include "apptsched/schedules.hpp"
