#pragma once

#include "tada/adam.hpp"
#include "tada/calibration.hpp"
#include "tada/config.hpp"
#include "tada/errors.hpp"
#include "tada/metrics.hpp"
#include "tada/mixing.hpp"
#include "tada/models.hpp"
#include "tada/nn.hpp"
#include "tada/pipeline.hpp"
#include "tada/report.hpp"
#include "tada/segment.hpp"
#include "tada/segment_io.hpp"
#include "tada/synth.hpp"
#include "tada/tape.hpp"
#include "tada/targeting.hpp"
#include "tada/tensor.hpp"
#include "tada/training.hpp"
#include "tada/weights.hpp"
