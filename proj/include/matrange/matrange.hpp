#pragma once

// Umbrella header: operator-system toolkit for small dense complex matrices.

#include "matrange/errors.hpp"
#include "matrange/matrix.hpp"
#include "matrange/eig.hpp"
#include "matrange/sample.hpp"
#include "matrange/json_io.hpp"
#include "matrange/parallel.hpp"
#include "matrange/numrange.hpp"
#include "matrange/opsys.hpp"
#include "matrange/dilation.hpp"
#include "matrange/extreme.hpp"
#include "matrange/matricial.hpp"
#include "matrange/named.hpp"
#include "matrange/fixtures.hpp"
