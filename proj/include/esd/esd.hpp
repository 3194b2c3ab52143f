#pragma once

#include "esd/complex_matrix.hpp"
#include "esd/dynamics.hpp"
#include "esd/eigen.hpp"
#include "esd/entanglement.hpp"
#include "esd/errors.hpp"
#include "esd/io.hpp"
#include "esd/protocols.hpp"
#include "esd/selftest.hpp"
#include "esd/states.hpp"
