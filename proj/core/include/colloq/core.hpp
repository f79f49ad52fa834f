#pragma once

#include "colloq/core/error.hpp"
#include "colloq/core/math.hpp"
#include "colloq/core/rng.hpp"
#include "colloq/core/serialization.hpp"
#include "colloq/core/types.hpp"
#include "colloq/approx.hpp"
#include "colloq/avgcase.hpp"
#include "colloq/blockcoding.hpp"
#include "colloq/huffman.hpp"
#include "colloq/ordering.hpp"
#include "colloq/worstcase.hpp"
