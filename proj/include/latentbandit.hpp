#pragma once

#include "latentbandit/analysis.hpp"
#include "latentbandit/bandit.hpp"
#include "latentbandit/config.hpp"
#include "latentbandit/csv.hpp"
#include "latentbandit/errors.hpp"
#include "latentbandit/graph.hpp"
#include "latentbandit/graph_json.hpp"
#include "latentbandit/graph_metrics.hpp"
#include "latentbandit/policies.hpp"
#include "latentbandit/random.hpp"
#include "latentbandit/sim.hpp"
#include "latentbandit/verify.hpp"
