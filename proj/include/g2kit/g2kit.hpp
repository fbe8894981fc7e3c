#pragma once

#include "g2kit/scalar.hpp"
#include "g2kit/linalg.hpp"
#include "g2kit/exterior.hpp"
#include "g2kit/g2.hpp"
#include "g2kit/bryant.hpp"
#include "g2kit/lie.hpp"
#include "g2kit/models.hpp"
#include "g2kit/sampling.hpp"
#include "g2kit/json_io.hpp"
#include "g2kit/selftest.hpp"
