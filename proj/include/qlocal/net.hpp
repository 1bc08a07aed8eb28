#pragma once

#include "qlocal/net/arena.hpp"
#include "qlocal/net/engine.hpp"
#include "qlocal/net/topology.hpp"
#include "qlocal/net/triangle.hpp"
