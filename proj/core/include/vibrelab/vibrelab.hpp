#pragma once

#include "vibrelab/daq.hpp"
#include "vibrelab/dsp.hpp"
#include "vibrelab/error.hpp"
#include "vibrelab/fft.hpp"
#include "vibrelab/pipeline.hpp"
#include "vibrelab/signal.hpp"
#include "vibrelab/svg.hpp"
#include "vibrelab/synth.hpp"
