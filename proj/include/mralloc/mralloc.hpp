#pragma once

// Two-time-scale OFDMA downlink resource allocation between a rail
// mobile relay and local users: trajectory geometry, two-path Doppler
// channel statistics, closed-form inter-carrier interference, ergodic
// capacities, the OPSA/CPSA allocation policies, and the brute-force
// Monte-Carlo oracles that validate the closed forms.

#include "mralloc/capacity.hpp"
#include "mralloc/channel.hpp"
#include "mralloc/config.hpp"
#include "mralloc/csv.hpp"
#include "mralloc/ici.hpp"
#include "mralloc/mc_oracle.hpp"
#include "mralloc/numeric.hpp"
#include "mralloc/optimizer.hpp"
#include "mralloc/params.hpp"
#include "mralloc/rng.hpp"
#include "mralloc/runner.hpp"
#include "mralloc/scenario.hpp"
