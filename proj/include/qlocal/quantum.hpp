#pragma once

#include "qlocal/quantum/gate.hpp"
#include "qlocal/quantum/graph_state.hpp"
#include "qlocal/quantum/measurement.hpp"
#include "qlocal/quantum/sparse_state.hpp"
#include "qlocal/quantum/state_vector.hpp"
