#pragma once

#include "kerrcat/fock.hpp"
#include "kerrcat/ion.hpp"
#include "kerrcat/kerr.hpp"
#include "kerrcat/laguerre.hpp"
#include "kerrcat/wigner.hpp"
