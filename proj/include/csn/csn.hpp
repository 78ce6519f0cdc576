#pragma once

// Information filtering on coupled social networks: social influence (RWR,
// LIN, LOUT), cosine preference, their hybrid, top-L collaborative filtering,
// and the evaluation and analysis tooling around them.

#include "csn/analysis.hpp"
#include "csn/cache.hpp"
#include "csn/config.hpp"
#include "csn/error.hpp"
#include "csn/evaluation.hpp"
#include "csn/experiment.hpp"
#include "csn/io.hpp"
#include "csn/network.hpp"
#include "csn/purify.hpp"
#include "csn/recommender.hpp"
#include "csn/similarity.hpp"
#include "csn/split.hpp"
#include "csn/stats.hpp"
#include "csn/sweep.hpp"
#include "csn/synthgen.hpp"
