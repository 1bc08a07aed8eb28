#pragma once

#include "qlocal/verify/classical.hpp"
#include "qlocal/verify/parity.hpp"
#include "qlocal/verify/support.hpp"
