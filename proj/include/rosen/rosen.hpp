#ifndef ROSEN_ROSEN_HPP
#define ROSEN_ROSEN_HPP

#include "rosen/bv.hpp"
#include "rosen/clt.hpp"
#include "rosen/errors.hpp"
#include "rosen/interval.hpp"
#include "rosen/map.hpp"
#include "rosen/mixing.hpp"
#include "rosen/params.hpp"
#include "rosen/parallel.hpp"
#include "rosen/piecewise.hpp"
#include "rosen/rng.hpp"
#include "rosen/stats.hpp"
#include "rosen/transfer.hpp"
#include "rosen/trigamma.hpp"
#include "rosen/ulam.hpp"

#endif
