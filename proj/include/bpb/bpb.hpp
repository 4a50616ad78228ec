#pragma once

// Umbrella header.

#include "bpb/certificate.hpp"
#include "bpb/circle_search.hpp"
#include "bpb/correct.hpp"
#include "bpb/errors.hpp"
#include "bpb/experiment.hpp"
#include "bpb/instance.hpp"
#include "bpb/measure.hpp"
#include "bpb/modulus.hpp"
#include "bpb/operator.hpp"
#include "bpb/rng.hpp"
#include "bpb/serialize.hpp"
#include "bpb/space.hpp"
