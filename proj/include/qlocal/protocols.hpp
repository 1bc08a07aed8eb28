#pragma once

#include "qlocal/protocols/affine.hpp"
#include "qlocal/protocols/derandomize.hpp"
#include "qlocal/protocols/k_copies.hpp"
#include "qlocal/protocols/process.hpp"
#include "qlocal/protocols/subgraph_state.hpp"
#include "qlocal/protocols/triangle.hpp"
#include "qlocal/protocols/triangle_input.hpp"
