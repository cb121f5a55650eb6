#pragma once

#include "stackyfan/integer.hpp"
#include "stackyfan/lattice.hpp"
#include "stackyfan/cone.hpp"
#include "stackyfan/fan.hpp"
#include "stackyfan/stacky_fan.hpp"
#include "stackyfan/km_fan.hpp"
#include "stackyfan/birational.hpp"
