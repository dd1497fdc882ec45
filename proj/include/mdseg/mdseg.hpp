#ifndef MDSEG_MDSEG_HPP
#define MDSEG_MDSEG_HPP

#include "mdseg/bench.hpp"
#include "mdseg/config.hpp"
#include "mdseg/distance.hpp"
#include "mdseg/errors.hpp"
#include "mdseg/evalmetrics.hpp"
#include "mdseg/image.hpp"
#include "mdseg/image_io.hpp"
#include "mdseg/optimizer.hpp"
#include "mdseg/pipeline.hpp"
#include "mdseg/report.hpp"
#include "mdseg/rng.hpp"
#include "mdseg/set_metric.hpp"
#include "mdseg/state.hpp"
#include "mdseg/sum_index.hpp"
#include "mdseg/synthgen.hpp"

#endif  // MDSEG_MDSEG_HPP
