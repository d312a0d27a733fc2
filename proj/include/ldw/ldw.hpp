#pragma once

#include "ldw/exact_dp.hpp"
#include "ldw/free_group.hpp"
#include "ldw/geometry.hpp"
#include "ldw/harmonic.hpp"
#include "ldw/ldp.hpp"
#include "ldw/measure.hpp"
#include "ldw/rng.hpp"
#include "ldw/schottky.hpp"
#include "ldw/sl2.hpp"
#include "ldw/spectrum.hpp"
#include "ldw/stats.hpp"
#include "ldw/tree_space.hpp"
#include "ldw/walk_engine.hpp"
#include "ldw/word.hpp"
