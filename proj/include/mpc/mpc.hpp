#pragma once

#include "mpc/config.hpp"
#include "mpc/domains.hpp"
#include "mpc/errors.hpp"
#include "mpc/expansion.hpp"
#include "mpc/io.hpp"
#include "mpc/metrics.hpp"
#include "mpc/privilege.hpp"
#include "mpc/rng.hpp"
#include "mpc/runner.hpp"
#include "mpc/score_model.hpp"
#include "mpc/session.hpp"
