#pragma once

#include "ajscc/errors.hpp"
#include "ajscc/experiments.hpp"
#include "ajscc/fm_channel.hpp"
#include "ajscc/kde_kld.hpp"
#include "ajscc/mosfet.hpp"
#include "ajscc/parallel.hpp"
#include "ajscc/phi_optimizer.hpp"
#include "ajscc/precircuit.hpp"
#include "ajscc/random.hpp"
#include "ajscc/slope_decoder.hpp"
#include "ajscc/source_field.hpp"
