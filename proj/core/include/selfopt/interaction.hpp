#pragma once

#include "selfopt/environment.hpp"
#include "selfopt/history.hpp"
#include "selfopt/policy.hpp"
#include "selfopt/random.hpp"

namespace selfopt {

// One interaction cycle: query the policy, sample the percept from the
// environment cursor, advance the cursor and append to the history. The
// cursor must be positioned at the end of h.
Percept sample_step(const EnvironmentModel& env, EnvironmentModel::Cursor& at,
                    Policy& policy, History& h, RandomSource& rng);

}  // namespace selfopt
