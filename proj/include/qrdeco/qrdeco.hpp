#pragma once

#include "analysis.hpp"
#include "bath.hpp"
#include "closedform.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "label.hpp"
#include "reference_tables.hpp"
#include "register.hpp"
#include "special.hpp"
