#pragma once

#include "porder/xreal.hpp"
#include "porder/log_error.hpp"
#include "porder/power_function.hpp"
#include "porder/error_sequence.hpp"
#include "porder/sequence_io.hpp"
#include "porder/estimators.hpp"
#include "porder/classify.hpp"
#include "porder/solvers.hpp"
#include "porder/kpoint.hpp"
#include "porder/spectral.hpp"
#include "porder/testbed.hpp"
