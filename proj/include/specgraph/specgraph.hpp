#pragma once

#include "specgraph/error.hpp"
#include "specgraph/vertex_set.hpp"
#include "specgraph/graph.hpp"
#include "specgraph/graph_io.hpp"
#include "specgraph/mask_search.hpp"
#include "specgraph/combinatorial.hpp"
#include "specgraph/check_report.hpp"
#include "specgraph/hausdorff.hpp"
#include "specgraph/spectral.hpp"
#include "specgraph/complete_graph.hpp"
#include "specgraph/families.hpp"
#include "specgraph/harness.hpp"
