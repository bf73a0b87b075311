#pragma once

#include "isogeo/types.hpp"
#include "isogeo/state_space.hpp"
#include "isogeo/bundle_geometry.hpp"
#include "isogeo/observables.hpp"
#include "isogeo/numerics.hpp"
#include "isogeo/evolution.hpp"
#include "isogeo/bures_compare.hpp"
