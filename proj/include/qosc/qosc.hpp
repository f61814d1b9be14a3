#ifndef QOSC_QOSC_HPP
#define QOSC_QOSC_HPP

#include "qosc/analytic.hpp"
#include "qosc/hermite.hpp"
#include "qosc/operators.hpp"
#include "qosc/params.hpp"
#include "qosc/quadrature.hpp"
#include "qosc/states.hpp"
#include "qosc/verify.hpp"

#endif  // QOSC_QOSC_HPP
