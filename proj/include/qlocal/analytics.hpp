#pragma once

#include "qlocal/analytics/adversary.hpp"
#include "qlocal/analytics/distributions.hpp"
