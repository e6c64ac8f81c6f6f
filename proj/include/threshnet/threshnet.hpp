#pragma once

#include "threshnet/annealer.hpp"
#include "threshnet/circuit.hpp"
#include "threshnet/comparison.hpp"
#include "threshnet/config.hpp"
#include "threshnet/core.hpp"
#include "threshnet/dichotomizer.hpp"
#include "threshnet/geodesic.hpp"
#include "threshnet/graph.hpp"
#include "threshnet/graphmetrics.hpp"
#include "threshnet/io.hpp"
#include "threshnet/lagmodel.hpp"
#include "threshnet/netgen.hpp"
#include "threshnet/parallel.hpp"
#include "threshnet/sweep.hpp"
#include "threshnet/table.hpp"
