#pragma once

#include "core.hpp"
#include "depth.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"
#include "polytope.hpp"
#include "region.hpp"
#include "scenario.hpp"
