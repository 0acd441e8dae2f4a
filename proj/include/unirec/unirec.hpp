#pragma once

// Umbrella header. io.hpp is left out since it pulls in nlohmann/json.

#include "unirec/cxcore.hpp"
#include "unirec/decompose.hpp"
#include "unirec/error.hpp"
#include "unirec/gauge.hpp"
#include "unirec/recursion.hpp"
#include "unirec/toolkit.hpp"
