#ifndef BLT_BLT_ALL_HPP_
#define BLT_BLT_ALL_HPP_

#include "blt/blt.hpp"
#include "blt/diff.hpp"
#include "blt/errors.hpp"
#include "blt/genfun.hpp"
#include "blt/loss.hpp"
#include "blt/opt.hpp"
#include "blt/poly.hpp"
#include "blt/stream.hpp"

#endif  // BLT_BLT_ALL_HPP_
