#pragma once

#include "synclab/error.hpp"
#include "synclab/graph.hpp"
#include "synclab/graph_io.hpp"
#include "synclab/partition.hpp"
#include "synclab/synchrony.hpp"
#include "synclab/automorphism.hpp"
#include "synclab/spectra.hpp"
#include "synclab/expression.hpp"
#include "synclab/fields.hpp"
#include "synclab/fixtures.hpp"
#include "synclab/dynamics.hpp"
#include "synclab/table1.hpp"
#include "synclab/verification.hpp"
