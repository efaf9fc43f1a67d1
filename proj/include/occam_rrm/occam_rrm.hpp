#pragma once

// Umbrella header.

#include "occam_rrm/version.hpp"
#include "occam_rrm/core/error.hpp"
#include "occam_rrm/core/format.hpp"
#include "occam_rrm/core/json_io.hpp"
#include "occam_rrm/core/mdp.hpp"
#include "occam_rrm/core/rng.hpp"
#include "occam_rrm/envs/admission.hpp"
#include "occam_rrm/envs/beamforming.hpp"
#include "occam_rrm/envs/channel.hpp"
#include "occam_rrm/envs/config.hpp"
#include "occam_rrm/envs/energy.hpp"
#include "occam_rrm/envs/handover.hpp"
#include "occam_rrm/envs/link_adapt.hpp"
#include "occam_rrm/envs/power.hpp"
#include "occam_rrm/envs/scheduling.hpp"
#include "occam_rrm/envs/single_state.hpp"
#include "occam_rrm/envs/tabular.hpp"
#include "occam_rrm/solvers/bandit.hpp"
#include "occam_rrm/solvers/beam_tracker.hpp"
#include "occam_rrm/solvers/gp.hpp"
#include "occam_rrm/solvers/plan.hpp"
#include "occam_rrm/solvers/policies.hpp"
#include "occam_rrm/solvers/rule.hpp"
#include "occam_rrm/solvers/static.hpp"
#include "occam_rrm/tuning.hpp"
#include "occam_rrm/advisor.hpp"
#include "occam_rrm/experiment/plot.hpp"
#include "occam_rrm/experiment/run.hpp"
#include "occam_rrm/experiment/schema.hpp"
