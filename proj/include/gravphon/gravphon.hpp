#pragma once

// Umbrella header.

#include "gravphon/config.hpp"
#include "gravphon/constants.hpp"
#include "gravphon/detector.hpp"
#include "gravphon/dynamics.hpp"
#include "gravphon/errors.hpp"
#include "gravphon/fock.hpp"
#include "gravphon/lattice.hpp"
#include "gravphon/lattice_verify.hpp"
#include "gravphon/measurement.hpp"
#include "gravphon/sensitivity.hpp"
#include "gravphon/waveform.hpp"
