#pragma once

#include "roam/ledger.hpp"
#include "roam/predictor.hpp"
#include "roam/ranking.hpp"
#include "roam/replay.hpp"
#include "roam/synth.hpp"
#include "roam/trace.hpp"
#include "roam/tth.hpp"
#include "roam/types.hpp"
