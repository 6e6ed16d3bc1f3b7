#pragma once

#include "spinadc/constants.hpp"
#include "spinadc/csv.hpp"
#include "spinadc/device.hpp"
#include "spinadc/drive.hpp"
#include "spinadc/errors.hpp"
#include "spinadc/llg.hpp"
#include "spinadc/metrics.hpp"
#include "spinadc/parallel.hpp"
#include "spinadc/pipeline.hpp"
#include "spinadc/quantizer.hpp"
#include "spinadc/rng.hpp"
#include "spinadc/runconfig.hpp"
#include "spinadc/switching.hpp"
#include "spinadc/thermal.hpp"
#include "spinadc/vec3.hpp"
