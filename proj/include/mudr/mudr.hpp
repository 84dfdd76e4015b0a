#ifndef MUDR_MUDR_HPP
#define MUDR_MUDR_HPP

#include "mudr/bounds.hpp"
#include "mudr/constants.hpp"
#include "mudr/error.hpp"
#include "mudr/mcsim.hpp"
#include "mudr/rates.hpp"
#include "mudr/region.hpp"
#include "mudr/scenario.hpp"
#include "mudr/waterfill.hpp"

#endif // MUDR_MUDR_HPP
