#pragma once

#include "susyqm/errors.hpp"
#include "susyqm/grid.hpp"
#include "susyqm/operators.hpp"
#include "susyqm/supercharge.hpp"
#include "susyqm/models.hpp"
#include "susyqm/spectrum.hpp"
#include "susyqm/susy_engine.hpp"
#include "susyqm/partner.hpp"
#include "susyqm/io.hpp"
