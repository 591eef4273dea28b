#pragma once

#include "rinkloc/errors.hpp"
#include "rinkloc/geometry.hpp"
#include "rinkloc/image.hpp"
#include "rinkloc/metrics.hpp"
#include "rinkloc/polygon.hpp"
#include "rinkloc/predictor.hpp"
#include "rinkloc/sbd.hpp"
#include "rinkloc/simulator.hpp"
#include "rinkloc/smoothing.hpp"
#include "rinkloc/trajectory.hpp"
