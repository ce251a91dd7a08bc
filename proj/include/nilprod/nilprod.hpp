#pragma once

/// Umbrella header for the whole library.

#include "nilprod/abelian.hpp"
#include "nilprod/claims.hpp"
#include "nilprod/group_algorithms.hpp"
#include "nilprod/groups.hpp"
#include "nilprod/haagerup.hpp"
#include "nilprod/nilfam.hpp"
#include "nilprod/nilprod2.hpp"
#include "nilprod/oracle.hpp"
#include "nilprod/wrap.hpp"
#include "nilprod/wreath.hpp"
