#pragma once

#include "spiked_fisher/error.hpp"
#include "spiked_fisher/random.hpp"
#include "spiked_fisher/quadrature.hpp"
#include "spiked_fisher/populations.hpp"
#include "spiked_fisher/bulk.hpp"
#include "spiked_fisher/covariance.hpp"
#include "spiked_fisher/fisher.hpp"
#include "spiked_fisher/phase_transition.hpp"
#include "spiked_fisher/stieltjes.hpp"
#include "spiked_fisher/clt.hpp"
#include "spiked_fisher/stats.hpp"
#include "spiked_fisher/tracy_widom.hpp"
#include "spiked_fisher/inference.hpp"
#include "spiked_fisher/linear_model.hpp"
#include "spiked_fisher/signal.hpp"
#include "spiked_fisher/montecarlo.hpp"
#include "spiked_fisher/csv.hpp"
#include "spiked_fisher/config.hpp"
#include "spiked_fisher/report.hpp"
