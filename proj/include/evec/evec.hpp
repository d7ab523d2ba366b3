#ifndef EVEC_EVEC_HPP
#define EVEC_EVEC_HPP

#include "evec/core.hpp"
#include "evec/engine.hpp"
#include "evec/errors.hpp"
#include "evec/linalg.hpp"
#include "evec/sequences.hpp"
#include "evec/theory.hpp"

#endif // EVEC_EVEC_HPP
