#pragma once

#include "unimodal/bench.hpp"
#include "unimodal/dataio.hpp"
#include "unimodal/entropy_audit.hpp"
#include "unimodal/error.hpp"
#include "unimodal/fitter.hpp"
#include "unimodal/model_zoo.hpp"
#include "unimodal/nelder_mead.hpp"
#include "unimodal/plot.hpp"
#include "unimodal/quadrature.hpp"
#include "unimodal/random.hpp"
#include "unimodal/version.hpp"
