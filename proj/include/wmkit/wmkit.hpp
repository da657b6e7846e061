#pragma once

#include "wmkit/attacks.hpp"
#include "wmkit/dct.hpp"
#include "wmkit/error.hpp"
#include "wmkit/gabor.hpp"
#include "wmkit/image.hpp"
#include "wmkit/lsb.hpp"
#include "wmkit/mbec.hpp"
#include "wmkit/metrics.hpp"
#include "wmkit/prng.hpp"
