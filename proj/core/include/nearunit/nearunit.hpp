#pragma once

#include "nearunit/asymptotics.hpp"
#include "nearunit/errors.hpp"
#include "nearunit/estimation.hpp"
#include "nearunit/io.hpp"
#include "nearunit/linalg.hpp"
#include "nearunit/montecarlo.hpp"
#include "nearunit/process.hpp"
#include "nearunit/rng.hpp"
#include "nearunit/spectrum.hpp"
#include "nearunit/types.hpp"
