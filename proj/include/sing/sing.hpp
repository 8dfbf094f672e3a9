#pragma once

#include "sing/blocked_vector.hpp"
#include "sing/config.hpp"
#include "sing/errors.hpp"
#include "sing/experiment.hpp"
#include "sing/landscapes.hpp"
#include "sing/mlp.hpp"
#include "sing/optimizers.hpp"
#include "sing/rng.hpp"
#include "sing/standardize.hpp"
#include "sing/svg_plot.hpp"
#include "sing/theory.hpp"
#include "sing/trace.hpp"
