#pragma once

#include "dctfuse/collaborative.hpp"
#include "dctfuse/color.hpp"
#include "dctfuse/cost.hpp"
#include "dctfuse/dct.hpp"
#include "dctfuse/fusion.hpp"
#include "dctfuse/image.hpp"
#include "dctfuse/io.hpp"
#include "dctfuse/pipeline.hpp"
