#pragma once

// Umbrella header: twisted-photon fields, atomic excitation amplitudes,
// polarization observables, and the scan driver.

#include "twistpol/angular.hpp"
#include "twistpol/beam.hpp"
#include "twistpol/config.hpp"
#include "twistpol/density.hpp"
#include "twistpol/polarization.hpp"
#include "twistpol/scan.hpp"
#include "twistpol/transition.hpp"
