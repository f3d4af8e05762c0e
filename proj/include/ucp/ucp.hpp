#pragma once

#include "ucp/corpus.hpp"
#include "ucp/errors.hpp"
#include "ucp/evaluation.hpp"
#include "ucp/fuzzy.hpp"
#include "ucp/karner.hpp"
#include "ucp/metrics.hpp"
#include "ucp/mlp.hpp"
#include "ucp/model.hpp"
#include "ucp/report.hpp"
