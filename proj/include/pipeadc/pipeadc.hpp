#pragma once

#include "pipeadc/config.hpp"
#include "pipeadc/correction.hpp"
#include "pipeadc/experiments.hpp"
#include "pipeadc/fft.hpp"
#include "pipeadc/metrics.hpp"
#include "pipeadc/pipeline.hpp"
#include "pipeadc/report_io.hpp"
#include "pipeadc/solver.hpp"
#include "pipeadc/stage_models.hpp"
#include "pipeadc/waveform.hpp"
